/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_bitmap_free: (a: number, b: number) => void;
export const bitmap_cells: (a: number) => [number, number];
export const bitmap_cols: (a: number) => number;
export const bitmap_rows: (a: number) => number;
export const codeReportJson: (a: number) => [number, number, number, number];
export const submatrixBitmap: (a: number, b: number, c: number) => [number, number, number];
export const tablesJson: (a: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
