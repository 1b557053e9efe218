//! Exact noncommutative polynomials over the alphabets `{a,b}`, `{c,d}`,
//! `{a,b,t}` and `{a,e}` (with `e = (a-b)^2`), together with cd-rewriting,
//! the derivation `Δ`, and the doubling morphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Longest {a,b}-word representable in a packed [`AbWord`].
pub const MAX_AB_DEGREE: usize = 64;

/// A word in a free monoid. Ordering is by degree first, then
/// lexicographic in letter order.
pub trait Word: Clone + Ord + Eq + Hash + fmt::Debug {
    fn empty() -> Self;
    fn concat(&self, rhs: &Self) -> Self;
    fn degree(&self) -> usize;
    /// Letters as ASCII bytes, in order.
    fn letters(&self) -> Vec<u8>;
    fn from_letters(letters: &[u8]) -> Option<Self>;
}

/// {a,b}-word packed into a bitstring, `a = 0`, `b = 1`, first letter in
/// the most significant position so that equal-length words compare
/// lexicographically with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbWord {
    len: u8,
    bits: u64,
}

impl AbWord {
    pub fn new(len: usize, bits: u64) -> Self {
        assert!(len <= MAX_AB_DEGREE, "ab-word longer than {MAX_AB_DEGREE}");
        debug_assert!(len == 64 || bits >> len == 0);
        AbWord {
            len: len as u8,
            bits,
        }
    }

    /// The word `u_S`: `b` at the 1-based positions listed in `mask`
    /// (bit `i-1` for position `i`), `a` elsewhere.
    pub fn from_subset_mask(len: usize, mask: u64) -> Self {
        let mut bits = 0u64;
        for i in 0..len {
            if mask >> i & 1 == 1 {
                bits |= 1 << (len - 1 - i);
            }
        }
        AbWord::new(len, bits)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `true` for `b` at 0-based position `i`.
    pub fn is_b(&self, i: usize) -> bool {
        (self.bits >> (self.len() - 1 - i)) & 1 == 1
    }

    pub fn a_power(len: usize) -> Self {
        AbWord::new(len, 0)
    }
}

impl Word for AbWord {
    fn empty() -> Self {
        AbWord { len: 0, bits: 0 }
    }

    fn concat(&self, rhs: &Self) -> Self {
        let len = self.len() + rhs.len();
        assert!(len <= MAX_AB_DEGREE, "ab-word longer than {MAX_AB_DEGREE}");
        let hi = if rhs.len() == 64 {
            0
        } else {
            self.bits << rhs.len()
        };
        AbWord::new(len, hi | rhs.bits)
    }

    fn degree(&self) -> usize {
        self.len()
    }

    fn letters(&self) -> Vec<u8> {
        (0..self.len())
            .map(|i| if self.is_b(i) { b'b' } else { b'a' })
            .collect()
    }

    fn from_letters(letters: &[u8]) -> Option<Self> {
        if letters.len() > MAX_AB_DEGREE {
            return None;
        }
        let mut bits = 0u64;
        for &l in letters {
            bits = match l {
                b'a' => bits << 1,
                b'b' => (bits << 1) | 1,
                _ => return None,
            };
        }
        Some(AbWord::new(letters.len(), bits))
    }
}

impl fmt::Debug for AbWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8(self.letters()).unwrap())
    }
}

/// Letter set and letter degrees for a [`ByteWord`].
pub trait Alphabet: Clone + Copy + PartialEq + Eq + Hash + Ord + fmt::Debug {
    const LETTERS: &'static [(u8, usize)];

    fn weight(letter: u8) -> Option<usize> {
        Self::LETTERS
            .iter()
            .find(|(l, _)| *l == letter)
            .map(|&(_, w)| w)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cd;
impl Alphabet for Cd {
    const LETTERS: &'static [(u8, usize)] = &[(b'c', 1), (b'd', 2)];
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Abt;
impl Alphabet for Abt {
    const LETTERS: &'static [(u8, usize)] = &[(b'a', 1), (b'b', 1), (b't', 1)];
}

/// `e` stands for `(a-b)^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Ae;
impl Alphabet for Ae {
    const LETTERS: &'static [(u8, usize)] = &[(b'a', 1), (b'e', 2)];
}

/// Word stored as a byte string over the alphabet `A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ByteWord<A: Alphabet> {
    degree: usize,
    bytes: Vec<u8>,
    _alphabet: PhantomData<A>,
}

impl<A: Alphabet> ByteWord<A> {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

impl<A: Alphabet> PartialOrd for ByteWord<A> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<A: Alphabet> Ord for ByteWord<A> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree, &self.bytes).cmp(&(other.degree, &other.bytes))
    }
}

impl<A: Alphabet> fmt::Debug for ByteWord<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.bytes).unwrap())
    }
}

impl<A: Alphabet> Word for ByteWord<A> {
    fn empty() -> Self {
        ByteWord {
            degree: 0,
            bytes: Vec::new(),
            _alphabet: PhantomData,
        }
    }

    fn concat(&self, rhs: &Self) -> Self {
        let mut bytes = Vec::with_capacity(self.bytes.len() + rhs.bytes.len());
        bytes.extend_from_slice(&self.bytes);
        bytes.extend_from_slice(&rhs.bytes);
        ByteWord {
            degree: self.degree + rhs.degree,
            bytes,
            _alphabet: PhantomData,
        }
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn letters(&self) -> Vec<u8> {
        self.bytes.clone()
    }

    fn from_letters(letters: &[u8]) -> Option<Self> {
        let mut degree = 0;
        for &l in letters {
            degree += A::weight(l)?;
        }
        Some(ByteWord {
            degree,
            bytes: letters.to_vec(),
            _alphabet: PhantomData,
        })
    }
}

pub type CdWord = ByteWord<Cd>;
pub type AbtWord = ByteWord<Abt>;
pub type AeWord = ByteWord<Ae>;

/// Finitely supported integer combination of words; zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<W: Word> {
    terms: BTreeMap<W, BigInt>,
}

pub type AbPolynomial = Polynomial<AbWord>;
pub type CdPolynomial = Polynomial<CdWord>;
pub type AbtPolynomial = Polynomial<AbtWord>;
pub type AePolynomial = Polynomial<AeWord>;

impl<W: Word> Default for Polynomial<W> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<W: Word> Polynomial<W> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(W::empty(), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(W::empty(), c.into())
    }

    pub fn monomial(word: W, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff.into());
        p
    }

    pub fn letter(letter: u8) -> Self {
        Self::monomial(W::from_letters(&[letter]).expect("letter in alphabet"), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (W, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &W) -> BigInt {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<W, BigInt> {
        self.terms
    }

    pub fn add_term(&mut self, word: W, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Multiplies on the left by a single word.
    pub fn left_word(&self, word: &W) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (word.concat(w), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() == degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.terms.keys().all(|w| w.degree() == degree)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.degree()).max()
    }

    /// Algebra morphism determined by letter images.
    pub fn substitute<V: Word>(&self, image: impl Fn(u8) -> Polynomial<V>) -> Polynomial<V> {
        let mut out = Polynomial::zero();
        for (w, c) in &self.terms {
            let mut prod = Polynomial::<V>::one();
            for l in w.letters() {
                prod = &prod * &image(l);
            }
            out += &prod.scale(c);
        }
        out
    }

    /// Rendering with runs collapsed to powers, e.g. `c^3 + cd + dc`.
    pub fn to_power_string(&self) -> String {
        render(self, true)
    }

    /// Terms keyed by their letter strings, for JSON output.
    pub fn to_word_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(w, c)| (String::from_utf8(w.letters()).unwrap(), c.to_string()))
            .collect()
    }

    /// Parses the rendering grammar: signed terms, each an optional
    /// integer coefficient (optionally followed by `·` or `*`) and a word
    /// whose letters may carry `^k` exponents. Whitespace is ignored.
    pub fn parse(input: &str) -> Result<Self> {
        let s: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s == ['0'] {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let mut i = 0;
        while i < s.len() {
            let mut sign = BigInt::one();
            if s[i] == '+' || s[i] == '-' {
                if s[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(Error::Parse(format!("expected + or - at offset {i}")));
            }
            let start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: BigInt = if i > start {
                s[start..i].iter().collect::<String>().parse().unwrap()
            } else {
                BigInt::one()
            };
            if i < s.len() && (s[i] == '·' || s[i] == '*') {
                i += 1;
            }
            let mut letters = Vec::new();
            while i < s.len() && s[i] != '+' && s[i] != '-' {
                let c = s[i];
                if !c.is_ascii_lowercase() {
                    return Err(Error::Parse(format!("unexpected {c:?}")));
                }
                i += 1;
                let mut reps = 1usize;
                if i < s.len() && s[i] == '^' {
                    i += 1;
                    let st = i;
                    while i < s.len() && s[i].is_ascii_digit() {
                        i += 1;
                    }
                    reps = s[st..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse("bad exponent".into()))?;
                }
                letters.extend(std::iter::repeat_n(c as u8, reps));
            }
            if i == start {
                return Err(Error::Parse("empty term".into()));
            }
            let word = W::from_letters(&letters).ok_or_else(|| {
                Error::Parse(format!(
                    "word {:?} uses letters outside the alphabet",
                    String::from_utf8_lossy(&letters)
                ))
            })?;
            out.add_term(word, sign * coeff);
        }
        Ok(out)
    }
}

fn render_word(letters: &[u8], powers: bool) -> String {
    if !powers {
        return String::from_utf8(letters.to_vec()).unwrap();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        out.push(letters[i] as char);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

fn render<W: Word>(p: &Polynomial<W>, powers: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (w, c)) in p.terms.iter().enumerate() {
        let word = render_word(&w.letters(), powers);
        let mag = c.abs();
        if k == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if word.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&word);
        } else {
            out.push_str(&format!("{mag}·{word}"));
        }
    }
    out
}

impl<W: Word> fmt::Display for Polynomial<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, false))
    }
}

impl<W: Word> fmt::Debug for Polynomial<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<W: Word> AddAssign<&Polynomial<W>> for Polynomial<W> {
    fn add_assign(&mut self, rhs: &Polynomial<W>) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<W: Word> SubAssign<&Polynomial<W>> for Polynomial<W> {
    fn sub_assign(&mut self, rhs: &Polynomial<W>) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl<W: Word> Add for &Polynomial<W> {
    type Output = Polynomial<W>;
    fn add(self, rhs: Self) -> Polynomial<W> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<W: Word> Sub for &Polynomial<W> {
    type Output = Polynomial<W>;
    fn sub(self, rhs: Self) -> Polynomial<W> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<W: Word> Add for Polynomial<W> {
    type Output = Polynomial<W>;
    fn add(mut self, rhs: Self) -> Polynomial<W> {
        self += &rhs;
        self
    }
}

impl<W: Word> Sub for Polynomial<W> {
    type Output = Polynomial<W>;
    fn sub(mut self, rhs: Self) -> Polynomial<W> {
        self -= &rhs;
        self
    }
}

impl<W: Word> Neg for &Polynomial<W> {
    type Output = Polynomial<W>;
    fn neg(self) -> Polynomial<W> {
        Polynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl<W: Word> Mul for &Polynomial<W> {
    type Output = Polynomial<W>;
    fn mul(self, rhs: Self) -> Polynomial<W> {
        let mut out = Polynomial::zero();
        for (u, x) in &self.terms {
            for (v, y) in &rhs.terms {
                out.add_term(u.concat(v), x * y);
            }
        }
        out
    }
}

impl<W: Word> Mul for Polynomial<W> {
    type Output = Polynomial<W>;
    fn mul(self, rhs: Self) -> Polynomial<W> {
        &self * &rhs
    }
}

/// `(a - b)^k`.
pub fn a_minus_b_power(k: usize) -> AbPolynomial {
    let amb = &AbPolynomial::letter(b'a') - &AbPolynomial::letter(b'b');
    amb.pow(k)
}

/// Substitutes `c ↦ a+b`, `d ↦ ab+ba` and expands.
pub fn cd_expand(q: &CdPolynomial) -> AbPolynomial {
    let mut out = AbPolynomial::zero();
    for (w, coeff) in q.terms() {
        // every letter contributes a two-way choice
        let mut words = vec![AbWord::empty()];
        for &l in w.as_bytes() {
            let choices: &[&[u8]] = if l == b'c' {
                &[b"a", b"b"]
            } else {
                &[b"ab", b"ba"]
            };
            words = words
                .iter()
                .flat_map(|prefix| {
                    choices
                        .iter()
                        .map(move |s| prefix.concat(&AbWord::from_letters(s).unwrap()))
                })
                .collect();
        }
        for word in words {
            out.add_term(word, coeff.clone());
        }
    }
    out
}

/// Location inside a graded matrix series, attached to rewriting failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesLocation {
    pub row: usize,
    pub col: usize,
    pub degree: usize,
}

/// The first residual term that cannot be the leading word of a
/// cd-monomial's expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotCdExpressible {
    pub word: String,
    pub coefficient: String,
    pub location: Option<SeriesLocation>,
}

impl fmt::Display for NotCdExpressible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not cd-expressible: residual term {}·{}",
            self.coefficient,
            if self.word.is_empty() {
                "1"
            } else {
                &self.word
            }
        )?;
        if let Some(loc) = &self.location {
            write!(
                f,
                " at entry ({}, {}), degree {}",
                loc.row + 1,
                loc.col + 1,
                loc.degree
            )?;
        }
        Ok(())
    }
}

impl std::error::Error for NotCdExpressible {}

/// Reads the unique cd-word whose `c ↦ a`, `d ↦ ab` image is `w`: the
/// word must start with `a` (when nonempty) and avoid the factor `bb`.
fn leading_cd_word(w: &AbWord) -> Option<CdWord> {
    let mut out = Vec::with_capacity(w.len());
    let mut i = 0;
    while i < w.len() {
        if w.is_b(i) {
            return None;
        }
        if i + 1 < w.len() && w.is_b(i + 1) {
            out.push(b'd');
            i += 2;
        } else {
            out.push(b'c');
            i += 1;
        }
    }
    CdWord::from_letters(&out)
}

/// Inverse of [`cd_expand`]: greedy triangular rewriting from the
/// lexicographically least surviving word.
pub fn ab_to_cd(p: &AbPolynomial) -> Result<CdPolynomial, Box<NotCdExpressible>> {
    let mut residual = p.clone();
    let mut out = CdPolynomial::zero();
    while let Some((w, c)) = residual.terms.iter().next().map(|(w, c)| (*w, c.clone())) {
        let Some(cd) = leading_cd_word(&w) else {
            return Err(Box::new(NotCdExpressible {
                word: String::from_utf8(w.letters()).unwrap(),
                coefficient: c.to_string(),
                location: None,
            }));
        };
        let mono = CdPolynomial::monomial(cd, c);
        residual -= &cd_expand(&mono);
        out += &mono;
    }
    Ok(out)
}

/// Expands an {a,e}-polynomial with `e = (a-b)^2`.
pub fn ae_expand(q: &AePolynomial) -> AbPolynomial {
    let e = a_minus_b_power(2);
    let a = AbPolynomial::letter(b'a');
    q.substitute(|l| if l == b'a' { a.clone() } else { e.clone() })
}

/// Reads the {a,e}-word whose `a ↦ a`, `e ↦ bb` image is `w`: every run
/// of `b` must have even length.
fn trailing_ae_word(w: &AbWord) -> Option<AeWord> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        if w.is_b(i) {
            if i + 1 < w.len() && w.is_b(i + 1) {
                out.push(b'e');
                i += 2;
            } else {
                return None;
            }
        } else {
            out.push(b'a');
            i += 1;
        }
    }
    AeWord::from_letters(&out)
}

/// Rewrites `p` in the variables `a` and `(a-b)^2`, working from the
/// lexicographically greatest surviving word of each degree (where the
/// image of `e` leads with `bb`).
pub fn ab_to_ae(p: &AbPolynomial) -> Result<AePolynomial, Box<NotCdExpressible>> {
    let mut residual = p.clone();
    let mut out = AePolynomial::zero();
    while let Some(deg) = residual.terms.keys().map(|w| w.degree()).max() {
        let (w, c) = residual
            .terms
            .iter()
            .rfind(|(w, _)| w.degree() == deg)
            .map(|(w, c)| (*w, c.clone()))
            .unwrap();
        let Some(ae) = trailing_ae_word(&w) else {
            return Err(Box::new(NotCdExpressible {
                word: String::from_utf8(w.letters()).unwrap(),
                coefficient: c.to_string(),
                location: None,
            }));
        };
        let mono = AePolynomial::monomial(ae, c);
        residual -= &ae_expand(&mono);
        out += &mono;
    }
    Ok(out)
}

pub fn ab_word_to_abt(w: &AbWord) -> AbtWord {
    AbtWord::from_letters(&w.letters()).unwrap()
}

/// Embeds an ab-polynomial into the {a,b,t} algebra.
pub fn ab_to_abt(p: &AbPolynomial) -> AbtPolynomial {
    AbtPolynomial::from_terms(p.terms().map(|(w, c)| (ab_word_to_abt(w), c.clone())))
}

/// The derivation with `Δ(a) = Δ(b) = t`: each word maps to the sum of
/// its copies with one letter replaced by `t`.
pub fn delta(p: &AbPolynomial) -> AbtPolynomial {
    let mut out = AbtPolynomial::zero();
    for (w, c) in p.terms() {
        let letters = w.letters();
        for i in 0..letters.len() {
            let mut l = letters.clone();
            l[i] = b't';
            out.add_term(AbtWord::from_letters(&l).unwrap(), c.clone());
        }
    }
    out
}

/// `p · t · q` in the {a,b,t} algebra.
pub fn join_with_t(p: &AbPolynomial, q: &AbPolynomial) -> AbtPolynomial {
    let t = AbtPolynomial::letter(b't');
    &(&ab_to_abt(p) * &t) * &ab_to_abt(q)
}

/// Coefficient of `a^m` in the degree-`m` part; this is `p` evaluated at
/// `a = t`, `b = 0` read as the coefficient of `t^m`.
pub fn specialize_b_zero(p: &AbPolynomial, m: usize) -> BigInt {
    p.coeff(&AbWord::a_power(m))
}

/// The horizontal doubling morphism: `a-b ↦ a-b`, `b ↦ 2b`, so `a ↦ a+b`.
pub fn f_horizontal(p: &AbPolynomial) -> AbPolynomial {
    let a_img = AbPolynomial::parse("a+b").unwrap();
    let b_img = AbPolynomial::parse("2b").unwrap();
    p.substitute(|l| {
        if l == b'a' {
            a_img.clone()
        } else {
            b_img.clone()
        }
    })
}

/// The vertical doubling morphism. An unselected rank becomes two
/// unselected ranks, `a-b ↦ (a-b)^2`, and a selected element `x` becomes `x_1`,
/// `x_2` or both, `b ↦ b(a-b) + (a-b)b + bb = ab+ba-bb`. Hence `a ↦ aa`.
pub fn f_vertical(p: &AbPolynomial) -> AbPolynomial {
    let a_img = AbPolynomial::parse("aa").unwrap();
    let b_img = AbPolynomial::parse("ab+ba-bb").unwrap();
    p.substitute(|l| {
        if l == b'a' {
            a_img.clone()
        } else {
            b_img.clone()
        }
    })
}

/// Truncated power series with `n×n` matrix coefficients: `slices[m]`
/// holds the homogeneous degree-`m` entries in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrixSeries<W: Word> {
    n: usize,
    slices: Vec<Vec<Polynomial<W>>>,
}

impl<W: Word> GradedMatrixSeries<W> {
    pub fn new(n: usize, slices: Vec<Vec<Polynomial<W>>>) -> Self {
        assert!(slices.iter().all(|s| s.len() == n * n), "slice shape");
        GradedMatrixSeries { n, slices }
    }

    pub fn zeros(n: usize, cap: usize) -> Self {
        GradedMatrixSeries {
            n,
            slices: vec![vec![Polynomial::zero(); n * n]; cap + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Highest degree stored.
    pub fn cap(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn entry(&self, degree: usize, row: usize, col: usize) -> &Polynomial<W> {
        &self.slices[degree][row * self.n + col]
    }

    pub fn entry_mut(&mut self, degree: usize, row: usize, col: usize) -> &mut Polynomial<W> {
        &mut self.slices[degree][row * self.n + col]
    }

    pub fn slice(&self, degree: usize) -> &[Polynomial<W>] {
        &self.slices[degree]
    }

    pub fn push_slice(&mut self, slice: Vec<Polynomial<W>>) {
        assert_eq!(slice.len(), self.n * self.n);
        self.slices.push(slice);
    }

    /// Sum of the slices `0..=cap` at entry `(row, col)`.
    pub fn entry_sum(&self, row: usize, col: usize) -> Polynomial<W> {
        let mut out = Polynomial::zero();
        for s in &self.slices {
            out += &s[row * self.n + col];
        }
        out
    }

    /// Every entry of slice `m` is homogeneous of degree `m`.
    pub fn is_graded(&self) -> bool {
        self.slices
            .iter()
            .enumerate()
            .all(|(m, s)| s.iter().all(|p| p.is_homogeneous_of(m)))
    }

    pub fn try_map<V: Word, E>(
        &self,
        mut f: impl FnMut(usize, usize, usize, &Polynomial<W>) -> Result<Polynomial<V>, E>,
    ) -> Result<GradedMatrixSeries<V>, E> {
        let mut slices = Vec::with_capacity(self.slices.len());
        for (m, s) in self.slices.iter().enumerate() {
            let mut out = Vec::with_capacity(s.len());
            for (idx, p) in s.iter().enumerate() {
                out.push(f(m, idx / self.n, idx % self.n, p)?);
            }
            slices.push(out);
        }
        Ok(GradedMatrixSeries { n: self.n, slices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab(s: &str) -> AbPolynomial {
        AbPolynomial::parse(s).unwrap()
    }

    fn cd(s: &str) -> CdPolynomial {
        CdPolynomial::parse(s).unwrap()
    }

    fn abt(s: &str) -> AbtPolynomial {
        AbtPolynomial::parse(s).unwrap()
    }

    #[test]
    fn free_algebra_products() {
        assert_eq!(&ab("a+b") * &ab("a+b"), ab("aa+ab+ba+bb"));
        let p = ab("3ab - ba + 2");
        assert_eq!(&p * &AbPolynomial::one(), p);
        assert_eq!(&ab("a-b") * &ab("a-b"), ab("aa-ab-ba+bb"));
        assert_eq!(a_minus_b_power(2), ab("aa-ab-ba+bb"));
        assert!((&ab("ab") - &ab("ab")).is_zero());
    }

    #[test]
    fn packed_words_order_lexicographically() {
        let w = |s: &str| AbWord::from_letters(s.as_bytes()).unwrap();
        assert!(w("aab") < w("aba"));
        assert!(w("abb") < w("baa"));
        assert!(w("b") < w("aa"));
        assert_eq!(w("ab").concat(&w("ba")), w("abba"));
        assert_eq!(AbWord::from_subset_mask(3, 0b101), w("bab"));
        assert_eq!(AbWord::from_subset_mask(3, 0b010), w("aba"));
        let long = AbWord::new(64, u64::MAX);
        assert_eq!(AbWord::empty().concat(&long), long);
    }

    #[test]
    fn cd_expand_examples() {
        assert_eq!(cd_expand(&cd("c")), ab("a+b"));
        assert_eq!(cd_expand(&cd("c^2+d")), ab("aa+2ab+2ba+bb"));
        assert_eq!(cd_expand(&cd("dd")), ab("abab+abba+baab+baba"));
        assert_eq!(cd_expand(&cd("1")), ab("1"));
    }

    #[test]
    fn ab_to_cd_examples() {
        assert_eq!(ab_to_cd(&ab("a+b")).unwrap(), cd("c"));
        assert_eq!(ab_to_cd(&ab("aa+2ab+2ba+bb")).unwrap(), cd("cc+d"));
        let err = ab_to_cd(&ab("a")).unwrap_err();
        assert_eq!(err.word, "b");
        assert_eq!(err.coefficient, "-1");
        assert_eq!(ab_to_cd(&ab("ab")).unwrap_err().word, "ba");
        assert_eq!(ab_to_cd(&ab("bb")).unwrap_err().word, "bb");
        assert_eq!(
            ab_to_cd(&AbPolynomial::zero()).unwrap(),
            CdPolynomial::zero()
        );
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&ab("a")), abt("t"));
        for n in 0..7 {
            assert!(delta(&a_minus_b_power(n)).is_zero(), "n = {n}");
        }
        // Δ(c + d) = 2t + ct + tc with c = a + b
        let got = delta(&cd_expand(&cd("c+d")));
        assert_eq!(got, abt("2t + at + bt + ta + tb"));
        assert!(delta(&AbPolynomial::one()).is_zero());
    }

    #[test]
    fn doubling_morphism_images() {
        assert_eq!(f_horizontal(&ab("b")), ab("2b"));
        assert_eq!(f_horizontal(&ab("a+b")), ab("a+3b"));
        assert_eq!(f_horizontal(&ab("a-b")), ab("a-b"));
        assert_eq!(f_vertical(&ab("a")), ab("aa"));
        assert_eq!(f_vertical(&ab("a-b")), a_minus_b_power(2));
        assert_eq!(
            f_vertical(&ab("b")),
            &(&ab("b") * &ab("a-b")) + &(&(&ab("a-b") * &ab("b")) + &ab("bb"))
        );
    }

    #[test]
    fn rendering_and_parsing() {
        let p = cd("ccc + cd + dc");
        assert_eq!(p.to_power_string(), "c^3 + cd + dc");
        assert_eq!(p.to_string(), "ccc + cd + dc");
        assert_eq!(abt("2·t + at - tb").to_string(), "2·t + at - tb");
        assert_eq!(ab("-ab + 3").to_string(), "3 - ab");
        assert_eq!(AbPolynomial::zero().to_string(), "0");
        assert_eq!(cd("c d"), cd("cd"));
        assert!(CdPolynomial::parse("ab").is_err());
        assert!(AbPolynomial::parse("").is_err());
        assert!(AbPolynomial::parse("a++b").is_err());
    }

    #[test]
    fn ae_rewriting() {
        let e = a_minus_b_power(2);
        let p = &(&e * &ab("a")) + &ab("3a");
        let q = ab_to_ae(&p).unwrap();
        assert_eq!(q, AePolynomial::parse("ea + 3a").unwrap());
        assert!(ab_to_ae(&ab("b")).is_err());
        assert!(ab_to_ae(&ab("ab")).is_err());
    }

    fn arb_ab(max_deg: usize) -> impl Strategy<Value = AbPolynomial> {
        prop::collection::vec((0..=max_deg, any::<u64>(), -3i64..=3), 0..6).prop_map(|terms| {
            AbPolynomial::from_terms(terms.into_iter().map(|(len, bits, c)| {
                let mask = if len == 0 {
                    0
                } else {
                    bits & (u64::MAX >> (64 - len))
                };
                (AbWord::new(len, mask), BigInt::from(c))
            }))
        })
    }

    fn arb_cd(max_deg: usize) -> impl Strategy<Value = CdPolynomial> {
        prop::collection::vec(
            (
                prop::collection::vec(prop::bool::ANY, 0..=max_deg),
                -4i64..=4,
            ),
            0..6,
        )
        .prop_map(move |terms| {
            CdPolynomial::from_terms(terms.into_iter().filter_map(|(letters, c)| {
                let bytes: Vec<u8> = letters
                    .iter()
                    .map(|&d| if d { b'd' } else { b'c' })
                    .collect();
                let w = CdWord::from_letters(&bytes).unwrap();
                (w.degree() <= max_deg).then(|| (w, BigInt::from(c)))
            }))
        })
    }

    proptest! {
        #[test]
        fn delta_is_a_derivation(p in arb_ab(5), q in arb_ab(5)) {
            let lhs = delta(&(&p * &q));
            let rhs = &(&delta(&p) * &ab_to_abt(&q)) + &(&ab_to_abt(&p) * &delta(&q));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_words_have_one_t(p in arb_ab(6)) {
            for (w, _) in delta(&p).terms() {
                prop_assert_eq!(w.as_bytes().iter().filter(|&&l| l == b't').count(), 1);
            }
        }

        #[test]
        fn cd_roundtrip(q in arb_cd(8)) {
            prop_assert_eq!(ab_to_cd(&cd_expand(&q)).unwrap(), q);
        }

        #[test]
        fn ab_to_cd_success_implies_roundtrip(p in arb_ab(4)) {
            if let Ok(q) = ab_to_cd(&p) {
                prop_assert_eq!(cd_expand(&q), p);
            }
        }

        #[test]
        fn doubling_morphisms_are_multiplicative(p in arb_ab(3), q in arb_ab(3)) {
            prop_assert_eq!(f_horizontal(&(&p * &q)), &f_horizontal(&p) * &f_horizontal(&q));
            prop_assert_eq!(f_vertical(&(&p * &q)), &f_vertical(&p) * &f_vertical(&q));
        }

        #[test]
        fn render_parse_roundtrip(p in arb_ab(5)) {
            prop_assert_eq!(AbPolynomial::parse(&p.to_string()).unwrap(), p.clone());
            prop_assert_eq!(AbPolynomial::parse(&p.to_power_string()).unwrap(), p);
        }
    }
}
