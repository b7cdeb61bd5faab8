/**
 * Spawn a decision-service instance for recording and testing (node only).
 * The service is the installed Python package; a temporary scenario store
 * keeps runs independent.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface RunningService {
  baseUrl: string;
  stop(): Promise<void>;
}

export async function startService(port: number, timeoutMs = 60000): Promise<RunningService> {
  const storeDir = mkdtempSync(join(tmpdir(), "etzplan-ui-store-"));
  const child: ChildProcess = spawn("python3", ["-m", "etzplan.service"], {
    env: {
      ...process.env,
      ETZPLAN_SCENARIO_DIR: storeDir,
      ETZPLAN_HOST: "127.0.0.1",
      ETZPLAN_PORT: String(port),
    },
    stdio: "ignore",
  });
  const baseUrl = `http://127.0.0.1:${port}`;

  const deadline = Date.now() + timeoutMs;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early with code ${child.exitCode}`);
    }
    try {
      const res = await fetch(`${baseUrl}/v1/health`);
      if (res.ok) {
        break;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill("SIGKILL");
      throw new Error(`service did not come up on port ${port} within ${timeoutMs} ms`);
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }

  return {
    baseUrl,
    async stop() {
      child.kill("SIGTERM");
      await new Promise<void>((resolve) => {
        const force = setTimeout(() => {
          child.kill("SIGKILL");
          resolve();
        }, 2000);
        child.once("exit", () => {
          clearTimeout(force);
          resolve();
        });
      });
      rmSync(storeDir, { recursive: true, force: true });
    },
  };
}
