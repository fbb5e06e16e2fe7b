import { HttpTransport } from "./api.js";
import { PlayLoop } from "./playloop.js";
import { renderSnapshot } from "./render.js";

const transport = new HttpTransport("");
const loop = new PlayLoop(transport);

const board = document.getElementById("board")!;
const status = document.getElementById("status")!;
const formulaInput = document.getElementById("formula") as HTMLInputElement;
const kindSelect = document.getElementById("kind") as HTMLSelectElement;

function refresh(): void {
  status.textContent = loop.state.message;
  if (loop.state.snapshot) {
    renderSnapshot(board, loop.state.snapshot, {
      onMove: (move) => loop.move(move).then(refresh),
    });
  } else {
    board.innerHTML = "";
  }
}

document.getElementById("start")!.addEventListener("click", () => {
  loop
    .start({ formula: formulaInput.value, kind: kindSelect.value })
    .then(refresh);
});

document.getElementById("pass")!.addEventListener("click", () => {
  loop.pass().then(refresh);
});

document.getElementById("finish")!.addEventListener("click", () => {
  loop.finish().then(refresh);
});
