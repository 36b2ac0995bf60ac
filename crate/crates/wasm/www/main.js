import init, { classify, beta_star_curve, Simulation, lp_block_rgba, lp_block_norms } from "./pkg/bsq_wasm.js";

const $ = (id) => document.getElementById(id);

function draw(canvas, n, pixels) {
  canvas.width = n;
  canvas.height = n;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  // grid rows run along x2; flip so x2 points up
  for (let r = 0; r < n; r++) {
    img.data.set(pixels.subarray(4 * n * r, 4 * n * (r + 1)), 4 * n * (n - 1 - r));
  }
  ctx.putImageData(img, 0, 0);
}

function drawCurve(alpha, beta) {
  const c = $("curve");
  const ctx = c.getContext("2d");
  const w = c.width, h = c.height;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(0, 0);
  ctx.lineTo(w, h);
  ctx.stroke();
  const pts = beta_star_curve(200);
  ctx.strokeStyle = "#c00";
  ctx.beginPath();
  for (let i = 0; i < pts.length; i += 2) {
    const x = pts[i] * w, y = h - pts[i + 1] * h;
    i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
  }
  ctx.stroke();
  ctx.fillStyle = "#00c";
  ctx.beginPath();
  ctx.arc(alpha * w, h - beta * h, 4, 0, 2 * Math.PI);
  ctx.fill();
}

function updateRegime() {
  const a = +$("alpha").value, b = +$("beta").value;
  $("alpha-v").value = a.toFixed(2);
  $("beta-v").value = b.toFixed(2);
  $("regime").value = classify(a, b);
  drawCurve(a, b);
}

let sim = null;
let playing = false;

function resetSim() {
  const n = +$("n").value;
  const dt = 0.25 / n;
  sim = new Simulation(+$("alpha").value, +$("beta").value, n, dt, 1n, $("kind").value);
  render();
}

function render() {
  const n = sim.size();
  draw($("sim"), n, sim.rgba($("field").value));
  const [w, th] = sim.norms();
  $("sim-status").value = `t = ${sim.time().toFixed(3)}  |omega|_2 = ${w.toFixed(4)}  |theta|_2 = ${th.toFixed(4)}`;
}

function tick() {
  if (!playing) return;
  try {
    sim.step(4);
    render();
    requestAnimationFrame(tick);
  } catch (e) {
    playing = false;
    $("play").textContent = "play";
    $("sim-status").value = String(e);
  }
}

function updateBlocks() {
  const n = 64, j = +$("block").value, seed = BigInt($("seed").value || 0);
  $("block-v").value = j;
  draw($("lp"), n, lp_block_rgba(n, seed, j));
  const norms = lp_block_norms(n, seed);
  $("block-norms").textContent = Array.from(norms, (v, i) => `j=${i - 1}: ${v.toExponential(3)}`).join("\n");
}

await init();
for (const id of ["alpha", "beta"]) $(id).addEventListener("input", () => { updateRegime(); resetSim(); });
for (const id of ["n", "kind"]) $(id).addEventListener("change", resetSim);
$("field").addEventListener("change", render);
$("reset").addEventListener("click", resetSim);
$("play").addEventListener("click", () => {
  playing = !playing;
  $("play").textContent = playing ? "pause" : "play";
  tick();
});
for (const id of ["block", "seed"]) $(id).addEventListener("input", updateBlocks);
updateRegime();
resetSim();
updateBlocks();
