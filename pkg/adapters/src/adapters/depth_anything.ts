#!/usr/bin/env node
import { HttpDepthEngine } from '../engines.js';
import { handleDepthJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('depth', (jobDir) =>
  handleDepthJob(jobDir, new HttpDepthEngine()),
);
