// Minimal ambient declarations so the tests compile without @types/node.

declare module "node:test" {
  export function test(name: string, fn: (t: any) => any | Promise<any>): Promise<void>;
  export function before(fn: () => any | Promise<any>): void;
  export function after(fn: () => any | Promise<any>): void;
}

declare module "node:assert/strict" {
  interface Assert {
    (value: unknown, message?: string): asserts value;
    equal(actual: unknown, expected: unknown, message?: string): void;
    notEqual(actual: unknown, expected: unknown, message?: string): void;
    deepEqual(actual: unknown, expected: unknown, message?: string): void;
    ok(value: unknown, message?: string): asserts value;
    fail(message?: string): never;
    match(value: string, regexp: RegExp, message?: string): void;
    throws(fn: () => unknown, message?: string): void;
  }
  const assert: Assert;
  export default assert;
}

declare module "node:fs" {
  export function readFileSync(path: string | URL, encoding?: string): any;
}

declare module "node:path" {
  export function join(...parts: string[]): string;
  export function dirname(path: string): string;
  export function resolve(...parts: string[]): string;
}

declare module "node:url" {
  export function fileURLToPath(url: string | URL): string;
}

declare module "node:child_process" {
  export interface ChildProcess {
    stdout: any;
    stderr: any;
    kill(signal?: string): boolean;
    on(event: string, listener: (...args: any[]) => void): void;
  }
  export function spawn(command: string, args: string[], options?: any): ChildProcess;
}

declare const process: {
  env: Record<string, string | undefined>;
  platform: string;
  exitCode?: number;
};

declare class AudioWorkletProcessor {
  readonly port: MessagePort;
  constructor();
}
declare function registerProcessor(name: string, ctor: any): void;
