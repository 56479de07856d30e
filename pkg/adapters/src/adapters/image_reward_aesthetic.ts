#!/usr/bin/env node
import { HttpAestheticEngine } from '../engines.js';
import { handleAestheticJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('aesthetic', (jobDir) =>
  handleAestheticJob(jobDir, new HttpAestheticEngine()),
);
