import init, { analyze, cd_index, shelling_tables } from "./pkg/levelposet_web.js";

const $ = (id) => document.getElementById(id);

function show(target, fn) {
  const out = $(target);
  out.classList.remove("error");
  try {
    out.textContent = fn();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
  }
}

function grid(rows) {
  const width = Math.max(...rows.flat().map((s) => s.length));
  return rows.map((r) => r.map((s) => s.padEnd(width)).join("  ").trimEnd()).join("\n");
}

function report(name, r) {
  const verdict = r.eulerian ? "yes" : `no (fails at p = ${r.failed_p})`;
  return `${name}: ${verdict}, checked p = ${r.checked_p.join(", ")}`;
}

await init();

for (const b of document.querySelectorAll("[data-preset]")) {
  b.addEventListener("click", () => { $("matrix").value = b.dataset.preset; });
}

$("analyze").addEventListener("click", () => show("analysis", () => {
  const r = JSON.parse(analyze($("matrix").value));
  return [
    `n = ${r.n}, d = ${r.d}, γ = ${r.gamma}`,
    `indecomposable: ${r.indecomposable}` + (r.exponent ? `, exponent ${r.exponent}` : ""),
    report("eulerian", r.eulerian),
    report("half-eulerian", r.half_eulerian),
  ].join("\n");
}));

$("index").addEventListener("click", () => show("index-out", () => {
  const r = JSON.parse(cd_index($("matrix").value, $("from").value, $("to").value, Number($("rank").value)));
  return `ab-index: ${r.ab_index}\ncd-index: ${r.cd_index ?? "not cd-expressible"}`;
}));

$("tables").addEventListener("click", () => show("tables-out", () => {
  const k = Number($("k").value);
  const r = JSON.parse(shelling_tables($("matrix").value, $("order").value, k));
  if (r.order === null) return `no vertex shelling order within walks of length ${k}`;
  const head = `order ${r.order.join(" < ")}`;
  if (!r.shelling) return `${head}: not a shelling order\n${r.violation}`;
  return [head, ...r.tables.map((t, i) => `Z^${i + 1} =\n${grid(t)}`)].join("\n\n");
}));
