/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_evaluation_free: (a: number, b: number) => void;
export const __wbg_synthesizer_free: (a: number, b: number) => void;
export const evaluate: (a: number, b: number, c: number, d: number) => [number, number, number];
export const evaluation_f_ob: (a: number) => number;
export const evaluation_feasible: (a: number) => number;
export const evaluation_generated: (a: number) => [number, number];
export const evaluation_grashof: (a: number) => number;
export const evaluation_link_lengths: (a: number) => [number, number];
export const published_free: () => [number, number];
export const published_prescribed: () => [number, number];
export const synthesizer_best_design: (a: number) => [number, number];
export const synthesizer_best_evaluation: (a: number) => [number, number, number];
export const synthesizer_finished: (a: number) => number;
export const synthesizer_generation: (a: number) => number;
export const synthesizer_new: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
export const synthesizer_step: (a: number, b: number) => number;
export const target_points: (a: number) => [number, number];
export const trace_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
