/* tslint:disable */
/* eslint-disable */

export class Explorer {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Normalized `u_{j+1}` on the grid.
     */
    eigenfunction(j: number): Float64Array;
    /**
     * Trusted eigenvalues; also the jump points of the counting function.
     */
    eigenvalues(): Float64Array;
    /**
     * Grid nodes `x_i`, endpoints included.
     */
    grid(): Float64Array;
    heat(center: number, width: number, t: number): Float64Array;
    constructor(k: number, l: number, domain_l: number, grid_n: number, modes: number);
    trusted(): number;
    weyl_slope(): number;
    /**
     * `n (1/(2k) + 1/(2l))`.
     */
    weyl_target(): number;
}

/**
 * Box half-width, grid points and requested modes that give a healthy
 * trusted prefix for `(k, l)`.
 */
export function preset(k: number, l: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_explorer_free: (a: number, b: number) => void;
    readonly explorer_eigenfunction: (a: number, b: number) => [number, number, number, number];
    readonly explorer_eigenvalues: (a: number) => [number, number];
    readonly explorer_grid: (a: number) => [number, number];
    readonly explorer_heat: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly explorer_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly explorer_trusted: (a: number) => number;
    readonly explorer_weyl_slope: (a: number) => [number, number, number];
    readonly explorer_weyl_target: (a: number) => number;
    readonly preset: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
