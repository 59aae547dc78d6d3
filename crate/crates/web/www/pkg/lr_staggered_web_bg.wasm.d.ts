/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const eigenstate_scan: (a: number, b: number, c: number) => [number, number, number, number];
export const evolve_nz: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const husimi_eigenstate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const pendulum_nz: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const scan_fields: () => number;
export const separatrix_energy: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
