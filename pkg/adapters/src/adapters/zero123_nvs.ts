#!/usr/bin/env node
import { HttpNvsEngine } from '../engines.js';
import { handleNvsJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('nvs', (jobDir) =>
  handleNvsJob(jobDir, new HttpNvsEngine()),
);
