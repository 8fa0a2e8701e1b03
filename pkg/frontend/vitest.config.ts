import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // every test that touches the CLI pays a Python interpreter startup
    testTimeout: 120_000,
  },
});
