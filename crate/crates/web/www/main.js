import init, { driftCurves, coupledPath, muIntegral, muFromTau0 } from "./pkg/colored_limits_web.js";

const num = (id) => Number(document.getElementById(id).value);
const msg = (id, text, isError = false) => {
  const el = document.getElementById(id);
  el.textContent = text;
  el.className = isError ? "err" : "";
};

function plot(canvas, xs, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const all = series.flatMap((s) => s.values);
  let lo = Math.min(...all), hi = Math.max(...all);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const pad = 30;
  const sx = (x) => pad + ((x - xs[0]) / (xs[xs.length - 1] - xs[0])) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - lo) / (hi - lo)) * (h - 2 * pad);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0)); ctx.lineTo(w - pad, sy(0));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(hi.toPrecision(3), 2, pad);
  ctx.fillText(lo.toPrecision(3), 2, h - pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.values.forEach((v, i) => (i ? ctx.lineTo(sx(xs[i]), sy(v)) : ctx.moveTo(sx(xs[i]), sy(v))));
    ctx.stroke();
  }
}

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  for (let i = 0; i < flat.length; i += width) {
    for (let c = 0; c < width; c++) cols[c].push(flat[i + c]);
  }
  return cols;
}

function runDrifts() {
  try {
    const lambdas = new Float64Array([num("d-l1"), num("d-l2"), num("d-l3")]);
    const [x, ito, mid, strat] = columns(driftCurves(new Float64Array([]), lambdas, num("d-tau"), 400), 4);
    plot(document.getElementById("d-canvas"), x, [
      { values: ito, color: "#888" },
      { values: mid, color: "#c60" },
      { values: strat, color: "#06c" },
    ]);
    msg("d-msg", "x over one period [0, 2π]");
  } catch (e) {
    msg("d-msg", String(e), true);
  }
}

function runPath() {
  try {
    const flat = coupledPath(num("p-eps"), num("p-gamma"), num("p-tau"), num("p-lambda"), num("p-x0"), 0, num("p-seed"), 2000);
    const [t, x, lim] = columns(flat, 3);
    plot(document.getElementById("p-canvas"), t, [
      { values: x, color: "#06c" },
      { values: lim, color: "#c60" },
    ]);
    const sup = Math.max(...x.map((v, i) => Math.abs(v - lim[i])));
    msg("p-msg", `sup |x − X| on the grid = ${sup.toPrecision(4)}`);
  } catch (e) {
    msg("p-msg", String(e), true);
  }
}

function runMu() {
  try {
    const mu = muFromTau0(num("m-alpha"), num("m-tau"));
    const [mean, se] = muIntegral(mu, num("m-exp"), num("m-paths"), 1);
    msg("m-msg", `μ = ${mu.toPrecision(4)}: mean gap ${mean.toPrecision(4)} ± ${se.toPrecision(2)} (expected ${mu.toPrecision(4)})`);
  } catch (e) {
    msg("m-msg", String(e), true);
  }
}

await init();
document.getElementById("d-run").onclick = runDrifts;
document.getElementById("p-run").onclick = runPath;
document.getElementById("m-run").onclick = runMu;
runDrifts();
