import init, { bracket, expansion, homology } from './pkg/khoma_web.js';

const $ = (id) => document.getElementById(id);
const out = $('out');

function table(head, rows) {
  const t = document.createElement('table');
  const tr = t.insertRow();
  for (const h of head) {
    const th = document.createElement('th');
    th.textContent = h;
    tr.appendChild(th);
  }
  for (const r of rows) {
    const row = t.insertRow();
    for (const c of r) row.insertCell().textContent = c;
  }
  return t;
}

function cell(c) {
  const parts = c.rank > 0 ? [String(c.rank)] : [];
  for (const t of c.torsion) parts.push('Z' + t);
  return parts.join('+');
}

function showBracket(v) {
  out.replaceChildren(table(['method', '⟨D⟩'], [
    ['state sum', v.state_sum],
    ['spanning tree', v.spanning_tree],
  ]));
}

function showExpansion(v) {
  out.replaceChildren(
    table(['leaf', 'state', 'x', 'y', 'w', 'r'], v.leaves.map((l) => [l.word, l.state, l.x, l.y, l.w, l.r])),
    table(['i', 'j', 'rank'], v.module_a),
  );
}

function showHomology(v) {
  const is = [...new Set(v.cells.map((c) => c.i))];
  const js = [...new Set(v.cells.map((c) => c.j))].sort((a, b) => b - a);
  const imin = Math.min(...is), imax = Math.max(...is);
  const cols = [];
  for (let i = imin; i <= imax; i++) cols.push(i);
  const at = (i, j) => v.cells.find((c) => c.i === i && c.j === j);
  const rows = js.map((j) => [j, ...cols.map((i) => (at(i, j) ? cell(at(i, j)) : ''))]);
  out.replaceChildren(table(['j \\ i', ...cols], rows));
}

function run(f, show) {
  $('error').textContent = '';
  try {
    show(JSON.parse(f()));
  } catch (e) {
    out.replaceChildren();
    $('error').textContent = e.message ?? String(e);
  }
}

await init();
$('preset').addEventListener('change', (e) => { $('pd').value = e.target.value; $('numbering').value = ''; });
$('run-bracket').addEventListener('click', () => run(() => bracket($('pd').value, $('numbering').value), showBracket));
$('run-expansion').addEventListener('click', () => run(() => expansion($('pd').value, $('numbering').value), showExpansion));
$('run-homology').addEventListener('click', () => run(() => homology($('pd').value, $('normalize').checked), showHomology));
