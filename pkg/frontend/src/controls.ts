// Command entry: numeric velocity fields, a detection-probability slider,
// and drag-to-aim on the canvas. Dragging maps the pixel vector to velocity
// through dragUnitsPerPixel, which the legend spells out next to the canvas.

export interface CommandSink {
  (u: [number, number], detectProb: number): void;
}

export interface ControlElements {
  ux: HTMLInputElement;
  uy: HTMLInputElement;
  prob: HTMLInputElement;
  probLabel: HTMLElement;
  send: HTMLButtonElement;
  legend: HTMLElement;
  canvas: HTMLCanvasElement;
}

export interface ControlsOptions {
  dragUnitsPerPixel: number;
}

export function dragToVelocity(
  start: [number, number],
  end: [number, number],
  unitsPerPixel: number,
): [number, number] {
  // screen y grows downward; world y grows upward
  return [
    (end[0] - start[0]) * unitsPerPixel,
    (start[1] - end[1]) * unitsPerPixel,
  ];
}

export function attachControls(
  el: ControlElements,
  opts: ControlsOptions,
  submit: CommandSink,
): void {
  const scale = opts.dragUnitsPerPixel;
  el.legend.textContent = `drag on canvas to aim: 1 px = ${scale} velocity units`;

  const currentProb = () => Number(el.prob.value);
  el.prob.addEventListener("input", () => {
    el.probLabel.textContent = `detection p = ${currentProb().toFixed(2)}`;
  });

  el.send.addEventListener("click", () => {
    submit([Number(el.ux.value), Number(el.uy.value)], currentProb());
  });

  let dragStart: [number, number] | null = null;
  el.canvas.addEventListener("mousedown", (ev) => {
    dragStart = [ev.offsetX, ev.offsetY];
  });
  el.canvas.addEventListener("mouseup", (ev) => {
    if (!dragStart) return;
    const u = dragToVelocity(dragStart, [ev.offsetX, ev.offsetY], scale);
    dragStart = null;
    el.ux.value = u[0].toFixed(2);
    el.uy.value = u[1].toFixed(2);
    submit(u, currentProb());
  });
}
