/* tslint:disable */
/* eslint-disable */

/**
 * Parses a graph and returns its node labels and edge lists.
 */
export function describe(graph: string): string;

/**
 * The graph after intervening on `x`.
 */
export function intervention(graph: string, x: string): string;

/**
 * Optimal models for a constraint file; `dialect` is `alt`, `orig` or
 * `both`.
 */
export function learn_models(constraints: string, dialect: string): string;

/**
 * `x ⊥ y | z` under criterion 1-4; sets are comma-separated labels.
 */
export function separation(graph: string, x: string, y: string, z: string, criterion: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly describe: (a: number, b: number) => [number, number];
    readonly intervention: (a: number, b: number, c: number, d: number) => [number, number];
    readonly learn_models: (a: number, b: number, c: number, d: number) => [number, number];
    readonly separation: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
