#!/usr/bin/env node
import { HttpVqaEngine } from '../engines.js';
import { handleVqaJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('vqa', (jobDir) =>
  handleVqaJob(jobDir, new HttpVqaEngine()),
);
