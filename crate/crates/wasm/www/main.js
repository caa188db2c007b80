import init, { spectrum, squareScan, routePair } from './pkg/cvrouter_wasm.js';

const field = (root, name) => root.querySelector(`[name=${name}]`);
const num = (root, name) => Number(field(root, name).value);

function show(root, text, isError = false) {
  const pre = root.querySelector('pre');
  pre.textContent = text;
  pre.className = isError ? 'err' : '';
}

function guarded(root, fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      show(root, String(e.message ?? e), true);
    }
  };
}

function drawGraph(canvas, res) {
  const ctx = canvas.getContext('2d');
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const inA = new Set(res.partition_a);
  const r = Math.min(w, h) / 2 - 20;
  const pos = Array.from({ length: res.n }, (_, i) => {
    const t = (2 * Math.PI * i) / res.n - Math.PI / 2;
    return [w / 2 + r * Math.cos(t), h / 2 + r * Math.sin(t)];
  });
  ctx.strokeStyle = '#999';
  ctx.lineWidth = res.n > 60 ? 0.3 : 1;
  for (const [i, j] of res.edges) {
    ctx.beginPath();
    ctx.moveTo(...pos[i]);
    ctx.lineTo(...pos[j]);
    ctx.stroke();
  }
  const dot = res.n > 60 ? 2 : 6;
  pos.forEach(([x, y], i) => {
    ctx.fillStyle = inA.has(i) ? '#2a6fdb' : '#d9822b';
    ctx.beginPath();
    ctx.arc(x, y, dot, 0, 2 * Math.PI);
    ctx.fill();
  });
}

function runSpectrum() {
  const root = document.getElementById('spectrum');
  const req = { topology: { kind: field(root, 'kind').value }, n: num(root, 'n'), seed: num(root, 'seed'), s: num(root, 's') };
  const res = JSON.parse(spectrum(JSON.stringify(req)));
  drawGraph(root.querySelector('canvas'), res);
  const rep = res.report;
  const values = rep.eigenvalues_a.map((v) => v.toFixed(6)).join(', ');
  show(
    root,
    `lambda = ${rep.lambda.toFixed(6)}\n` +
      `provider A symplectic eigenvalues: ${values}\n` +
      `unit values: ${rep.count_one}, contains lambda: ${rep.contains_lambda}\n` +
      `bipartite routing: ${rep.verdict_bipartite}, internal routing: ${rep.verdict_internal}` +
      (rep.notes.length ? `\n${rep.notes.join('\n')}` : ''),
  );
}

function runScan() {
  const root = document.getElementById('scan');
  const res = JSON.parse(squareScan(num(root, 's'), num(root, 'steps')));
  const canvas = root.querySelector('canvas');
  const ctx = canvas.getContext('2d');
  const n = res.steps;
  const img = ctx.createImageData(n, n);
  const logs = res.grid.map((v) => Math.log10(v));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs);
  logs.forEach((v, k) => {
    // Rows of the grid run along phi1; draw phi1 on the x axis.
    const i = Math.floor(k / n);
    const j = k % n;
    const t = hi > lo ? (v - lo) / (hi - lo) : 0;
    const p = 4 * ((n - 1 - j) * n + i);
    img.data[p] = 255 * t;
    img.data[p + 1] = 80 + 120 * (1 - t);
    img.data[p + 2] = 255 * (1 - t);
    img.data[p + 3] = 255;
  });
  const off = new OffscreenCanvas(n, n);
  off.getContext('2d').putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  const [p1, p2] = res.argmin;
  ctx.strokeStyle = '#fff';
  ctx.beginPath();
  ctx.arc((p1 / (2 * Math.PI)) * canvas.width, (1 - p2 / (2 * Math.PI)) * canvas.height, 6, 0, 2 * Math.PI);
  ctx.stroke();
  show(
    root,
    `min over grid of max(|Var(Q0) - lambda|, |Cov(Q0, P0)|) = ${res.min_max_residual.toFixed(6)}\n` +
      `at phi1 = ${p1.toFixed(4)}, phi2 = ${p2.toFixed(4)} (circled; x: phi1, y: phi2, colour: log residual)`,
  );
}

function drawHistory(canvas, history) {
  const ctx = canvas.getContext('2d');
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const logs = history.map((f) => Math.log10(Math.max(f, 1e-16)));
  const lo = Math.min(...logs, -6);
  const hi = Math.max(...logs);
  ctx.strokeStyle = '#ccc';
  ctx.fillStyle = '#666';
  for (let d = Math.ceil(lo); d <= Math.floor(hi); d++) {
    const y = h - 10 - ((d - lo) / (hi - lo || 1)) * (h - 20);
    ctx.beginPath();
    ctx.moveTo(30, y);
    ctx.lineTo(w, y);
    ctx.stroke();
    ctx.fillText(`1e${d}`, 0, y + 4);
  }
  ctx.strokeStyle = '#2a6fdb';
  ctx.beginPath();
  logs.forEach((v, k) => {
    const x = 30 + (k / Math.max(logs.length - 1, 1)) * (w - 30);
    const y = h - 10 - ((v - lo) / (hi - lo || 1)) * (h - 20);
    k ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.stroke();
}

function runRoute() {
  const root = document.getElementById('route');
  const pair = field(root, 'pair').value.split(',').map((x) => Number(x.trim()));
  const req = {
    topology: { kind: field(root, 'kind').value },
    n: num(root, 'n'),
    s: num(root, 's'),
    seed: num(root, 'seed'),
    max_generations: num(root, 'gens'),
  };
  if (pair.length === 2 && pair.every(Number.isInteger)) req.pair = pair;
  const res = JSON.parse(routePair(JSON.stringify(req)));
  drawHistory(root.querySelector('canvas'), res.history);
  const block = res.routed.map((row) => row.map((x) => x.toFixed(5).padStart(10)).join(' ')).join('\n');
  show(
    root,
    `pair (${res.pair.join(', ')}): ${res.classification} after ${res.generations} generations\n` +
      `f_opt = ${res.f_opt.toExponential(3)}, purity = ${res.purity.toFixed(9)}\n` +
      `routed block (Qa, Qb, Pa, Pb):\n${block}`,
  );
}

await init();
for (const [id, fn] of [['spectrum', runSpectrum], ['scan', runScan], ['route', runRoute]]) {
  const root = document.getElementById(id);
  root.querySelector('button').addEventListener('click', guarded(root, fn));
}
guarded(document.getElementById('spectrum'), runSpectrum)();
