/* tslint:disable */
/* eslint-disable */

/**
 * Interval census up to `limit` for a rational `m`, with the model values
 * it is compared against.
 */
export function census(m: string, limit: number): string;

/**
 * Model probabilities for `steps + 1` evenly spaced `m` in
 * `[m_min, m_max]`: `{"m": [...], "lambda": [...], "p_s": [...], ...}`.
 */
export function lambda_curve(m_min: number, m_max: number, steps: number): string;

/**
 * First `count` terms of `kind` in {"ramanujan", "labos"}; with
 * `pseudo = true`, the R-primes (L-primes) below `limit` that are not
 * Ramanujan (Labos) primes instead.
 */
export function sequence(kind: string, m: string, count: number, pseudo: boolean, limit: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly census: (a: number, b: number, c: number) => [number, number, number, number];
    readonly lambda_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly sequence: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
