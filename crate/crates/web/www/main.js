// Built with: wasm-bindgen --target web --out-dir www/pkg <lrcoh_web.wasm>
import init, { cohomology, invariants, curve } from "./pkg/lrcoh_web.js";

const examples = {
  cubic: '[ring]\nvariables = ["x", "y", "z"]\nweights = [1, 1, 1]\nf = "x^3 + y^3 + z^3"\n',
  quartic: '[ring]\nvariables = ["x", "y", "z"]\nweights = [1, 1, 1]\nf = "x^4 + y^4 + z^4"\n',
  e: '[ring]\nvariables = ["x", "y", "z"]\nweights = [4, 3, 3]\nf = "x^3 + y^4 + z^4"\n',
  g23: "[curve]\ngenerators = [2, 3]\nlambda_complement = [1]\n",
  g345: "[curve]\ngenerators = [3, 4, 5]\nlambda_complement = [2]\n",
};
const ops = { cohomology, invariants, curve };

const $ = (id) => document.getElementById(id);

function el(tag, text, cls) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (cls) e.className = cls;
  return e;
}

function table(t) {
  const tab = el("table");
  tab.append(el("caption", t.title));
  const head = el("tr");
  t.columns.forEach((c) => head.append(el("th", c)));
  tab.append(head);
  for (const row of t.rows) {
    const tr = el("tr");
    row.forEach((c) => tr.append(el("td", c)));
    tab.append(tr);
  }
  return tab;
}

function render(result) {
  const out = $("out");
  out.replaceChildren();
  if (result.error) {
    $("status").textContent = "input error";
    out.append(el("pre", result.error, "fail"));
    return;
  }
  const r = result.report;
  const failed = r.assertions.filter((a) => !a.passed).length;
  $("status").textContent = failed ? `${failed} assertion(s) failed` : "all assertions passed";
  $("status").className = failed ? "fail" : "pass";
  r.tables.forEach((t) => out.append(table(t)));
  const list = el("ul");
  let claim = null;
  for (const a of r.assertions) {
    if (a.statement !== claim) {
      claim = a.statement;
      list.append(el("li", "claim: " + claim));
    }
    const tag = a.passed ? "PASS" : "FAIL";
    list.append(el("li", `[${tag}] ${a.name}${a.detail ? " (" + a.detail + ")" : ""}`, a.passed ? "pass" : "fail"));
  }
  out.append(list);
  if (r.representatives.length) {
    out.append(el("pre", r.representatives.map((p) => `${p.label} ${p.at}: ${p.value}`).join("\n")));
  }
}

await init();
$("source").value = examples.cubic;
$("example").addEventListener("change", (e) => { $("source").value = examples[e.target.value]; });
for (const b of document.querySelectorAll("button[data-op]")) {
  b.addEventListener("click", () => {
    $("status").textContent = "running...";
    setTimeout(() => render(JSON.parse(ops[b.dataset.op]($("source").value))), 0);
  });
}
