/* tslint:disable */
/* eslint-disable */

/**
 * Flattened rows `t, x, X`; `coarse_dt ≤ 0` selects the default grid.
 */
export function coupledPath(epsilon: number, gamma: number, tau0: number, lambda: number, x0: number, coarse_dt: number, seed: number, max_rows: number): Float64Array;

/**
 * Flattened rows `x, Itô, intermediate, Stratonovich`.
 */
export function driftCurves(mu0: Float64Array, lambdas: Float64Array, tau0: number, points: number): Float64Array;

export function muFromTau0(alpha: number, tau0: number): number;

/**
 * `[mean, se]` of the μ-sum minus the left-endpoint sum.
 */
export function muIntegral(mu: number, exponent: number, paths: number, seed: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly coupledPath: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly driftCurves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly muFromTau0: (a: number, b: number) => [number, number, number];
    readonly muIntegral: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
