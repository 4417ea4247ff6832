import init, { generate, inspect, stab } from "./pkg/ds_web.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function el(tag, attrs, parent) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (parent) parent.appendChild(e);
  return e;
}

// One row per letter, one column per position; blocks are separated by
// vertical rules and special blocks are shaded.
function diagram(view) {
  const ids = [...new Set(view.blocks.flat())].sort((a, b) => a - b);
  const row = new Map(ids.map((l, i) => [l, i]));
  const rows = ids.length;
  const cols = view.length;
  const cell = Math.max(3, Math.min(14, Math.floor(1000 / Math.max(cols, 1))));
  const rowH = Math.max(3, Math.min(14, Math.floor(400 / Math.max(rows, 1))));
  const svg = el("svg", { width: cols * cell + 2, height: rows * rowH + 2 });
  let x = 0;
  view.blocks.forEach((block, i) => {
    if (view.special[i]) {
      el("rect", { x: x * cell, y: 0, width: Math.max(block.length * cell, 2), height: rows * rowH, fill: "#fde9c8" }, svg);
    }
    block.forEach((letter, j) => {
      const c = el("circle", {
        cx: (x + j) * cell + cell / 2,
        cy: row.get(letter) * rowH + rowH / 2,
        r: Math.max(1.2, Math.min(cell, rowH) / 2 - 1),
        fill: `hsl(${(letter * 137) % 360} 60% 45%)`,
      }, svg);
      el("title", {}, c).textContent = `letter ${letter}, block ${i + 1}`;
    });
    x += block.length;
    el("line", { x1: x * cell + 0.5, x2: x * cell + 0.5, y1: 0, y2: rows * rowH, stroke: "#bbb" }, svg);
  });
  const wrap = document.createElement("div");
  wrap.className = "diagram";
  wrap.appendChild(svg);
  return wrap;
}

function errorLine(msg) {
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = msg;
  return p;
}

function showSequence(target, json) {
  const view = JSON.parse(json);
  target.replaceChildren();
  if (view.error) {
    target.appendChild(errorLine(view.error));
    return;
  }
  const occ = view.occurrences ? `${view.occurrences[0]}..${view.occurrences[1]}` : "none";
  const stats = document.createElement("p");
  stats.textContent = `${view.blocks.length} blocks, ${view.letters} letters, length ${view.length}, ` +
    `occurrences per letter ${occ}, longest alternation ${view.max_alternation}`;
  target.appendChild(stats);
  if (view.length <= 20000) target.appendChild(diagram(view));
  const list = document.createElement("ul");
  for (const c of view.checks) {
    const li = document.createElement("li");
    li.className = c.passed ? "pass" : "fail";
    li.textContent = `${c.passed ? "PASS" : "FAIL"} ${c.name}: ${c.detail}`;
    list.appendChild(li);
  }
  target.appendChild(list);
  const pre = document.createElement("pre");
  pre.textContent = view.text;
  target.appendChild(pre);
}

function showStab(target, json) {
  const v = JSON.parse(json);
  target.replaceChildren();
  if (v.error) {
    target.appendChild(errorLine(v.error));
    return;
  }
  const p = document.createElement("p");
  p.textContent = `zeta = ${v.zeta}, eta = ${v.eta}`;
  const cover = document.createElement("pre");
  cover.textContent = "minimum stabbing tuples: " + (v.cover.join(" ") || "none");
  const packing = document.createElement("pre");
  packing.textContent = v.packing || "no packing";
  target.append(p, cover, packing);
}

await init();

$("family").addEventListener("change", () => {
  $("a-name").textContent = $("family").value === "xs" ? "s" : "d";
});
$("gen").addEventListener("click", () => {
  showSequence($("gen-out"), generate($("family").value, +$("a").value, +$("m").value));
});
$("inspect").addEventListener("click", () => showSequence($("inspect-out"), inspect($("seq").value)));
$("stab").addEventListener("click", () => {
  showStab($("stab-out"), stab(+$("r").value, +$("s").value, +$("k").value, +$("cm").value));
});
$("gen").click();
