/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_explorer_free: (a: number, b: number) => void;
export const explorer_eigenfunction: (a: number, b: number) => [number, number, number, number];
export const explorer_eigenvalues: (a: number) => [number, number];
export const explorer_grid: (a: number) => [number, number];
export const explorer_heat: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const explorer_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const explorer_trusted: (a: number) => number;
export const explorer_weyl_slope: (a: number) => [number, number, number];
export const explorer_weyl_target: (a: number) => number;
export const preset: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
