import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    globalSetup: ["./tests/global_setup.ts"],
    testTimeout: 30000,
    hookTimeout: 90000,
    fileParallelism: false,
  },
});
