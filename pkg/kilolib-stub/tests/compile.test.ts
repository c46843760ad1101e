import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { describe, expect, it } from "vitest";

import { STUB_ROOT, compileCheck } from "../src/compileCheck.js";

const REPO_ROOT = resolve(STUB_ROOT, "..");
const GOLDEN_C = join(REPO_ROOT, "tests", "golden", "c");

function goldenFiles(): string[] {
  return readdirSync(GOLDEN_C)
    .filter((name) => name.endsWith(".c"))
    .sort()
    .map((name) => join(GOLDEN_C, name));
}

describe("golden corpus", () => {
  const files = goldenFiles();

  it("ships all ten controllers", () => {
    expect(files).toHaveLength(10);
  });

  for (const file of goldenFiles()) {
    it(`compiles ${file.split("/").pop()} warning-free`, () => {
      const result = compileCheck(file);
      expect(result.output).toBe("");
      expect(result.ok).toBe(true);
    });
  }
});

describe("corruption is caught", () => {
  it("fails when a kilolib symbol is renamed", () => {
    const source = readFileSync(goldenFiles()[0], "utf8");
    const corrupted = source.replace(/kilo_start/g, "kilo_startt");
    expect(corrupted).not.toBe(source);
    const dir = mkdtempSync(join(tmpdir(), "corrupt-"));
    const path = join(dir, "corrupted.c");
    writeFileSync(path, corrupted);
    const result = compileCheck(path);
    expect(result.ok).toBe(false);
    expect(result.output).toContain("kilo_startt");
  });

  it("fails on an introduced warning", () => {
    const source = readFileSync(goldenFiles()[0], "utf8");
    const corrupted = source.replace(
      "int main(void)\n{",
      "int main(void)\n{\n    int unused_variable;",
    );
    expect(corrupted).not.toBe(source);
    const dir = mkdtempSync(join(tmpdir(), "warn-"));
    const path = join(dir, "warned.c");
    writeFileSync(path, corrupted);
    const result = compileCheck(path);
    expect(result.ok).toBe(false);
  });
});

describe("freshly generated controllers", () => {
  it("blink output from the compiler CLI passes", () => {
    const dir = mkdtempSync(join(tmpdir(), "blink-"));
    const out = join(dir, "blinker.c");
    const proc = spawnSync(
      process.env.PYTHON ?? "python3",
      [
        "-m",
        "kiloscript",
        "compile",
        join(REPO_ROOT, "scenes", "blink.screenplay"),
        "--role",
        "blinker",
        "--out",
        out,
      ],
      { encoding: "utf8", cwd: REPO_ROOT },
    );
    expect(proc.status, proc.stderr).toBe(0);
    const result = compileCheck(out);
    expect(result.output).toBe("");
    expect(result.ok).toBe(true);
  });
});
