/** Spawns the real session service (scripted backend) for integration tests. */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const SERVICE_PORT = 8741;
export const SERVICE_URL = `http://127.0.0.1:${SERVICE_PORT}`;

let child: ChildProcess | null = null;

async function waitForHealthy(deadlineMs: number): Promise<void> {
  const started = Date.now();
  while (Date.now() - started < deadlineMs) {
    try {
      const response = await fetch(`${SERVICE_URL}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error(`session service did not become healthy on ${SERVICE_URL}`);
}

export default async function setup(): Promise<() => void> {
  const storeDir = mkdtempSync(join(tmpdir(), "tutor-console-"));
  child = spawn("python3", ["-m", "bloomtutor.service"], {
    env: {
      ...process.env,
      BLOOMTUTOR_BACKEND_KIND: "scripted",
      BLOOMTUTOR_PORT: String(SERVICE_PORT),
      BLOOMTUTOR_HOST: "127.0.0.1",
      BLOOMTUTOR_STORE_DIR: storeDir,
      BLOOMTUTOR_IDLE_TIMEOUT_S: "600",
    },
    stdio: "ignore",
  });
  await waitForHealthy(20000);
  return () => {
    child?.kill("SIGTERM");
  };
}
