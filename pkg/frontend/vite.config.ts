import { defineConfig } from "vite";

const SERVICE_ORIGIN = "http://127.0.0.1:8741";

export default defineConfig({
  build: {
    outDir: "dist",
    emptyOutDir: true,
  },
  test: {
    environment: "happy-dom",
    // the console is served by the session service, so tests run same-origin
    environmentOptions: { happyDOM: { url: SERVICE_ORIGIN } },
    globalSetup: "./tests/service-setup.ts",
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
