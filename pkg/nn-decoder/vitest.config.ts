import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    testTimeout: 180_000,
    hookTimeout: 180_000,
    // tfjs keeps global state (registered variables, backend); isolate files
    pool: 'forks',
    fileParallelism: false,
  },
});
