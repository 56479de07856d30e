#!/usr/bin/env node
import { HttpJudgeEngine } from '../engines.js';
import { handleJudgeJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('judge', (jobDir) =>
  handleJudgeJob(jobDir, new HttpJudgeEngine()),
);
