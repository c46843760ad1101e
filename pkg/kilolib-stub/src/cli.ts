/** CLI: `node dist/cli.js controller.c ...` — exits 1 on any failure. */

import { compileCheckAll } from "./compileCheck.js";

const files = process.argv.slice(2);
if (files.length === 0) {
  console.error("usage: compile-check <controller.c> [...]");
  process.exit(2);
}

const results = compileCheckAll(files);
let failed = 0;
for (const result of results) {
  if (result.ok) {
    console.log(`PASS ${result.file}`);
  } else {
    failed += 1;
    console.error(`FAIL ${result.file}`);
    if (result.output) {
      console.error(result.output);
    }
  }
}
process.exit(failed === 0 ? 0 : 1);
