/* tslint:disable */
/* eslint-disable */

export class Bitmap {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major cells, one byte each.
     */
    cells(): Uint8Array;
    readonly cols: number;
    readonly rows: number;
}

export function codeReportJson(q: number): string;

export function submatrixBitmap(q: number, i: number, j: number): Bitmap;

export function tablesJson(q: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_bitmap_free: (a: number, b: number) => void;
    readonly bitmap_cells: (a: number) => [number, number];
    readonly bitmap_cols: (a: number) => number;
    readonly bitmap_rows: (a: number) => number;
    readonly codeReportJson: (a: number) => [number, number, number, number];
    readonly submatrixBitmap: (a: number, b: number, c: number) => [number, number, number];
    readonly tablesJson: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
