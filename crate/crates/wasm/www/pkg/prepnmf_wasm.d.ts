/* tslint:disable */
/* eslint-disable */

export function alpha_bar(csv: string): number;

export function fixture(name: string): string;

export function fixture_names(): string;

export function fk_samples(csv: string, alpha: number, k: number, samples: number): string;

export function nested_geometry(csv: string, alpha: number): string;

export function preprocess_matrix(csv: string, epsilon: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly alpha_bar: (a: number, b: number) => [number, number, number];
    readonly fixture: (a: number, b: number) => [number, number, number, number];
    readonly fixture_names: () => [number, number];
    readonly fk_samples: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly nested_geometry: (a: number, b: number, c: number) => [number, number, number, number];
    readonly preprocess_matrix: (a: number, b: number, c: number) => [number, number, number, number];
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
