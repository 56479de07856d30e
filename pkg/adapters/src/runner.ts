/**
 * Shared adapter entry point.
 *
 * Usage: node <adapter>.js <job_dir>
 *        node <adapter>.js --manifest
 *
 * Any failure is reported as a response.json with status "error" plus a
 * nonzero exit; the adapter never crashes without leaving a response
 * when the job directory is reachable.
 */

import { buildManifest } from './manifest.js';
import { writeResponse } from './protocol.js';

export type JobHandler = (jobDir: string) => Promise<void>;

export async function runAdapter(
  kind: string,
  handler: JobHandler,
  argv: string[] = process.argv.slice(2),
): Promise<number> {
  if (argv.includes('--manifest')) {
    process.stdout.write(JSON.stringify(buildManifest(kind), null, 2) + '\n');
    return 0;
  }
  const positional = argv.filter((a) => !a.startsWith('--'));
  if (positional.length !== 1) {
    process.stderr.write(`usage: ${kind}-adapter <job_dir> | --manifest\n`);
    return 2;
  }
  const jobDir = positional[0];
  try {
    await handler(jobDir);
    return 0;
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    try {
      writeResponse(jobDir, {
        status: 'error',
        message,
        meta: { manifest: buildManifest(kind) },
      });
    } catch {
      // job dir unreachable; stderr is all we have
    }
    process.stderr.write(`${kind} adapter failed: ${message}\n`);
    return 1;
  }
}
