#!/usr/bin/env node
import { HttpPerceptualEngine } from '../engines.js';
import { handlePerceptualJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('perceptual', (jobDir) =>
  handlePerceptualJob(jobDir, new HttpPerceptualEngine()),
);
