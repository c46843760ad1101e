/**
 * Strict compile-and-link check for generated Kilobot controllers.
 *
 * A controller passes when it builds against the stub kilolib.h and
 * links with the no-op kilolib.c under the strict flag set with zero
 * diagnostics. Linking doubles as the closure check: any symbol the
 * controller uses beyond the stub surface fails the link.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));
export const STUB_ROOT = resolve(HERE, "..");
export const INCLUDE_DIR = join(STUB_ROOT, "include");
export const STUB_SOURCE = join(STUB_ROOT, "src", "kilolib.c");

export const STRICT_FLAGS = [
  "-std=c99",
  "-Wall",
  "-Wextra",
  "-Wpedantic",
  "-Werror",
] as const;

export interface CheckResult {
  file: string;
  ok: boolean;
  /** compiler stdout+stderr, empty on a clean pass */
  output: string;
}

export interface CheckOptions {
  /** compiler binary, default `cc` (or $CC) */
  cc?: string;
}

export function compileCheck(
  cFile: string,
  options: CheckOptions = {},
): CheckResult {
  const cc = options.cc ?? process.env.CC ?? "cc";
  const workDir = mkdtempSync(join(tmpdir(), "kilolib-check-"));
  try {
    const out = join(workDir, "controller");
    const proc = spawnSync(
      cc,
      [
        ...STRICT_FLAGS,
        "-I",
        INCLUDE_DIR,
        resolve(cFile),
        STUB_SOURCE,
        "-o",
        out,
      ],
      { encoding: "utf8" },
    );
    if (proc.error) {
      return { file: cFile, ok: false, output: String(proc.error) };
    }
    const output = `${proc.stdout ?? ""}${proc.stderr ?? ""}`.trim();
    return { file: cFile, ok: proc.status === 0 && output === "", output };
  } finally {
    rmSync(workDir, { recursive: true, force: true });
  }
}

export function compileCheckAll(
  cFiles: string[],
  options: CheckOptions = {},
): CheckResult[] {
  return cFiles.map((f) => compileCheck(f, options));
}
