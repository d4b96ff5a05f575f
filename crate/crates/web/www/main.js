// Expects the wasm-pack output (`--target web`) in ./pkg.
import init, { density_curve, error_grid, am_gm } from "./pkg/gmrep_web.js";

const $ = (id) => document.getElementById(id);

function drawDensity(data) {
  const canvas = $("density");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const seq = data.sequence;
  const lo = seq[0], hi = seq[seq.length - 1];
  const span = hi > lo ? hi - lo : 1;
  const ymax = Math.max(1e-12, ...data.samples.map((s) => s.weighted));
  const x = (t) => 30 + ((t - lo) / span) * (w - 60);
  const y = (v) => h - 25 - (v / ymax) * (h - 45);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(20, y(0));
  ctx.lineTo(w - 20, y(0));
  ctx.stroke();
  ctx.fillStyle = "#333";
  for (const a of seq) {
    ctx.fillRect(x(a) - 1, y(0) - 4, 2, 8);
  }
  ctx.fillText(`max ${ymax.toPrecision(4)}`, 30, 14);

  const colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
  for (const seg of data.segments) {
    const pts = data.samples.filter((s) => s.segment === seg.index);
    ctx.strokeStyle = colors[(seg.index - 1) % colors.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x(seg.lo), y(0));
    for (const p of pts) ctx.lineTo(x(p.t), y(p.weighted));
    ctx.lineTo(x(seg.hi), y(0));
    ctx.stroke();
  }
}

// Blue for tiny errors, red for errors near 1e-8.
function color(v) {
  const s = Math.min(1, Math.max(0, (v + 17) / 9));
  return `rgb(${Math.round(255 * s)}, ${Math.round(80 * (1 - s))}, ${Math.round(255 * (1 - s))})`;
}

function drawGrid(data) {
  const canvas = $("grid");
  const ctx = canvas.getContext("2d");
  const n = data.re.length;
  const cw = canvas.width / n, ch = canvas.height / n;
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  data.log10_error.forEach((row, j) => {
    row.forEach((v, i) => {
      if (v === null) return;
      ctx.fillStyle = color(v);
      // Imaginary axis points up.
      ctx.fillRect(i * cw, canvas.height - (j + 1) * ch, Math.ceil(cw), Math.ceil(ch));
    });
  });
  $("gridinfo").textContent =
    `Re z in [${data.re[0]}, ${data.re[n - 1]}], Im z in [${data.im[0]}, ${data.im[n - 1]}], ` +
    `max error ${data.max_error.toExponential(2)}`;
}

function update() {
  const seq = $("seq").value.trim();
  const steps = Number($("steps").value) || 60;
  $("status").textContent = "";
  try {
    drawDensity(JSON.parse(density_curve(seq, 200)));
    const values = seq.split(",").map(Number);
    const a1 = Math.min(...values);
    drawGrid(JSON.parse(error_grid(seq, -a1 - 3, 5, -3, 3, steps)));
    $("gap").textContent = JSON.stringify(JSON.parse(am_gm(seq)), null, 2);
  } catch (e) {
    $("status").textContent = String(e);
  }
}

await init();
$("run").addEventListener("click", update);
$("seq").addEventListener("keydown", (e) => e.key === "Enter" && update());
update();
