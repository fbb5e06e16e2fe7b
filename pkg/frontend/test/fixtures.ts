import { readFileSync } from "node:fs";

import type {
  CreateResponse,
  FinishResponse,
  MoveResponse,
  Snapshot,
} from "../src/api.js";

export function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

export const peirceCreate = () => fixture<CreateResponse>("peirce_create");
export const peirceSnapshot = () => fixture<Snapshot>("peirce_snapshot");
export const peirceFinish = () => fixture<FinishResponse>("peirce_finish");
export const wechoCreate = () => fixture<CreateResponse>("wecho_create");
export const wechoMove = () => fixture<MoveResponse>("wecho_move");
export const wechoFinish = () => fixture<FinishResponse>("wecho_finish");
export const wechoFinal = () => fixture<Snapshot>("wecho_final");
