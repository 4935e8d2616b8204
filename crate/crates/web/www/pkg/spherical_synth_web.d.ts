/* tslint:disable */
/* eslint-disable */

/**
 * Objective value and linkage summary of a design.
 */
export class Evaluation {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly f_ob: number;
    readonly feasible: boolean;
    /**
     * Generated points at the design's input angles, flattened.
     */
    readonly generated: Float64Array;
    readonly grashof: boolean;
    readonly link_lengths: Float64Array;
}

/**
 * Differential evolution advanced a few generations per animation frame.
 */
export class Synthesizer {
    free(): void;
    [Symbol.dispose](): void;
    best_design(): Float64Array;
    best_evaluation(): Evaluation;
    constructor(free: boolean, stride: number, population: number, generations: number, cr: number, seed: bigint);
    /**
     * Runs up to `count` generations; returns the best objective value.
     */
    step(count: number): number;
    readonly finished: boolean;
    readonly generation: number;
}

/**
 * Evaluates a design against every `stride`-th target point.
 */
export function evaluate(design: Float64Array, free: boolean, stride: number): Evaluation;

/**
 * Published free-timing design (74 values).
 */
export function published_free(): Float64Array;

/**
 * Published prescribed-timing design (11 values).
 */
export function published_prescribed(): Float64Array;

/**
 * Target points, flattened `x, y, z` triples.
 */
export function target_points(stride: number): Float64Array;

/**
 * Generated curve over one input turn as flattened `x, y, z` triples; NaN
 * where the linkage cannot be assembled.
 */
export function trace_curve(design: Float64Array, free: boolean, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_evaluation_free: (a: number, b: number) => void;
    readonly __wbg_synthesizer_free: (a: number, b: number) => void;
    readonly evaluate: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly evaluation_f_ob: (a: number) => number;
    readonly evaluation_feasible: (a: number) => number;
    readonly evaluation_generated: (a: number) => [number, number];
    readonly evaluation_grashof: (a: number) => number;
    readonly evaluation_link_lengths: (a: number) => [number, number];
    readonly published_free: () => [number, number];
    readonly published_prescribed: () => [number, number];
    readonly synthesizer_best_design: (a: number) => [number, number];
    readonly synthesizer_best_evaluation: (a: number) => [number, number, number];
    readonly synthesizer_finished: (a: number) => number;
    readonly synthesizer_generation: (a: number) => number;
    readonly synthesizer_new: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
    readonly synthesizer_step: (a: number, b: number) => number;
    readonly target_points: (a: number) => [number, number];
    readonly trace_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
