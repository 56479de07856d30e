#!/usr/bin/env node
import { HttpQAGenEngine } from '../engines.js';
import { handleQAGenJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('qagen', (jobDir) =>
  handleQAGenJob(jobDir, new HttpQAGenEngine()),
);
