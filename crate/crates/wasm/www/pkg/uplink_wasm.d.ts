/* tslint:disable */
/* eslint-disable */

/**
 * Mean queueing delay in slots against packet size in Mbit. Returns
 * `[mbit, success, delay, ...]`; delay is NaN where the queue is unstable.
 */
export function delay_curve(env: string, scheme_name: string, altitude: number, max_mbit: number): Float64Array;

/**
 * Propulsion power over speed `0..=v_max`. Returns `[v, watts, ...]`.
 */
export function propulsion_curve(v_max: number, step: number): Float64Array;

/**
 * `[hover power, power-minimising speed]` for the default rotorcraft.
 */
export function propulsion_summary(): Float64Array;

/**
 * Success probability for thresholds `start..=stop` dB. Returns `[theta_db, p, ...]`.
 */
export function success_curve(env: string, scheme_name: string, altitude: number, start: number, stop: number, step: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly delay_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly propulsion_curve: (a: number, b: number) => [number, number, number, number];
    readonly propulsion_summary: () => [number, number, number, number];
    readonly success_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
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
