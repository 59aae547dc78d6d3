/* tslint:disable */
/* eslint-disable */

/**
 * Eigenstate scan flattened to rows of [`demo::SCAN_FIELDS`] values.
 */
export function eigenstate_scan(exchange: number, field: number, n_spins: number): Float64Array;

/**
 * `⟨n^z⟩(t)` on `points` times in `[0, t_max]`. `sigma = 0` evolves the
 * rotated Néel state itself.
 */
export function evolve_nz(exchange: number, field: number, n_spins: number, theta: number, sigma: number, t_max: number, points: number): Float64Array;

/**
 * Husimi grid of one eigenstate over `θ ∈ [0, 2π)`, `γ ∈ [-π, π)`,
 * row-major in `θ`.
 */
export function husimi_eigenstate(exchange: number, field: number, n_spins: number, m: number, index: number, n_theta: number, n_gamma: number): Float64Array;

/**
 * Mean-field pendulum `cos θ(t)` on the same grid.
 */
export function pendulum_nz(exchange: number, field: number, n_spins: number, theta: number, t_max: number, points: number): Float64Array;

export function scan_fields(): number;

/**
 * `J/2 + h n_spins/2`.
 */
export function separatrix_energy(exchange: number, field: number, n_spins: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly eigenstate_scan: (a: number, b: number, c: number) => [number, number, number, number];
    readonly evolve_nz: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly husimi_eigenstate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly pendulum_nz: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly scan_fields: () => number;
    readonly separatrix_energy: (a: number, b: number, c: number) => [number, number, number];
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
