import init, { alpha_bar, nested_geometry, fk_samples, preprocess_matrix, fixture, fixture_names } from "./pkg/prepnmf_wasm.js";

const $ = (id) => document.getElementById(id);
const RANK3 = ["nested-squares", "separable-rank3", "counter-example", "sparse-unique"];

function call(f, ...args) {
  try {
    return [JSON.parse(f(...args)), null];
  } catch (e) {
    return [null, e.message || String(e)];
  }
}

// world -> canvas transform fitted to a point set
function frame(canvas, pts, pad = 20) {
  const xs = pts.map((p) => p[0]), ys = pts.map((p) => p[1]);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const s = Math.min((canvas.width - 2 * pad) / (x1 - x0 || 1), (canvas.height - 2 * pad) / (y1 - y0 || 1));
  const ox = (canvas.width - s * (x1 - x0)) / 2, oy = (canvas.height - s * (y1 - y0)) / 2;
  return (p) => [ox + s * (p[0] - x0), canvas.height - (oy + s * (p[1] - y0))];
}

function polygon(ctx, pts, map, stroke, fill, width = 1.5) {
  if (!pts.length) return;
  ctx.beginPath();
  pts.forEach((p, i) => {
    const [x, y] = map(p);
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.closePath();
  if (fill) { ctx.fillStyle = fill; ctx.fill(); }
  ctx.lineWidth = width;
  ctx.strokeStyle = stroke;
  ctx.stroke();
}

let geoCsv = "";
let alphaBar = null;

function drawGeometry() {
  const alpha = parseFloat($("alpha").value);
  $("alpha-val").textContent = alpha.toFixed(4);
  const [g, err] = call(nested_geometry, geoCsv, alpha);
  const canvas = $("geo"), ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (err) { $("geo-info").innerHTML = `<span class="err">${err}</span>`; return; }
  const map = frame(canvas, g.outer);
  polygon(ctx, g.outer, map, "#888", "#f4f4f4");
  for (const t of g.triangles) polygon(ctx, t.vertices, map, "rgba(217,83,79,0.8)", "rgba(217,83,79,0.06)", 1);
  polygon(ctx, g.inner, map, "#1f6fb2", "rgba(31,111,178,0.15)", 2);
  ctx.fillStyle = "#1f6fb2";
  for (const p of g.points) {
    const [x, y] = map(p);
    ctx.beginPath(); ctx.arc(x, y, 3, 0, 2 * Math.PI); ctx.fill();
  }
  if (g.continuum_witness) {
    const [x, y] = map(g.continuum_witness);
    ctx.fillStyle = "#d9534f";
    ctx.beginPath(); ctx.arc(x, y, 5, 0, 2 * Math.PI); ctx.fill();
  }
  const count = g.solution_count === null ? "infinitely many (a continuum starts at the red dot)" : g.solution_count;
  $("geo-info").innerHTML =
    `&alpha;&#772; = ${alphaBar === null ? "n/a" : alphaBar.toFixed(6)}<br>largest gap ${g.max_gap.toExponential(2)}<br>triangles: ${count}`;
  drawFk();
}

// alpha-bar is a bisection over the feasibility test; compute it once per matrix
function loadGeometry(csv) {
  geoCsv = csv;
  try { alphaBar = alpha_bar(csv); } catch (e) { alphaBar = null; }
  drawGeometry();
}

function drawFk() {
  const alpha = parseFloat($("alpha").value);
  const k = Math.max(1, parseInt($("fk-k").value, 10) || 3);
  const [v, err] = call(fk_samples, geoCsv, alpha, k, 600);
  const canvas = $("fk"), ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (err) { $("fk-info").innerHTML = `<span class="err">${err}</span>`; return; }
  const gap = v.f.map((f, i) => f - v.t[i]);
  const pts = v.t.map((t, i) => [t, gap[i]]);
  const map = frame(canvas, [...pts, [0, v.perimeter], [0, 0]], 25);
  ctx.strokeStyle = "#999"; ctx.setLineDash([5, 4]);
  ctx.beginPath();
  let [x, y] = map([0, v.perimeter]); ctx.moveTo(x, y);
  [x, y] = map([v.perimeter, v.perimeter]); ctx.lineTo(x, y);
  ctx.stroke(); ctx.setLineDash([]);
  ctx.strokeStyle = "#1f6fb2"; ctx.lineWidth = 1.5;
  ctx.beginPath();
  pts.forEach((p, i) => { const [a, b] = map(p); i ? ctx.lineTo(a, b) : ctx.moveTo(a, b); });
  ctx.stroke();
  const best = Math.max(...gap) - v.perimeter;
  $("fk-info").innerHTML = `max<sub>t</sub> f<sub>${k}</sub>(t) - t - perimeter = ${best.toExponential(2)}<br>(sampled, 600 points)`;
}

function runPreprocess() {
  const eps = parseFloat($("epsilon").value) || 0;
  const [v, err] = call(preprocess_matrix, $("pre-input").value, eps);
  if (err) { $("pre-info").innerHTML = `<span class="err">${err}</span>`; $("pre-out").innerHTML = ""; return; }
  $("pre-info").innerHTML =
    `&rho;(B*) = ${v.rho.toFixed(8)}${v.rho >= 0.99 ? " <b>(close to 1: I - B* nearly singular)</b>" : ""}` +
    `<br>sparsity: M ${v.s_m.toFixed(3)} &rarr; P(M) ${v.s_p.toFixed(3)}`;
  const table = (rows, title) =>
    `<p><b>${title}</b></p><table>` +
    rows.map((r) => "<tr>" + r.map((x) => `<td class="${Math.abs(x) < 1e-12 ? "zero" : ""}">${x.toFixed(4)}</td>`).join("") + "</tr>").join("") +
    "</table>";
  $("pre-out").innerHTML = table(v.p, "P(M)") + table(v.b_star, "B*");
}

async function main() {
  await init();
  const names = fixture_names().split(",");
  for (const n of RANK3) $("geo-fixture").add(new Option(n, n));
  for (const n of names) $("pre-fixture").add(new Option(n, n));
  $("geo-fixture").onchange = () => { loadGeometry(fixture($("geo-fixture").value)); };
  $("alpha").oninput = drawGeometry;
  $("fk-k").onchange = drawFk;
  $("to-alpha-bar").onclick = () => { if (alphaBar !== null) { $("alpha").value = alphaBar; drawGeometry(); } };
  $("pre-fixture").onchange = () => { $("pre-input").value = fixture($("pre-fixture").value); runPreprocess(); };
  $("pre-run").onclick = runPreprocess;
  loadGeometry(fixture(RANK3[0]));
  $("pre-fixture").value = "separable-rank3";
  $("pre-input").value = fixture("separable-rank3");
  runPreprocess();
}

main();
