// Plain-object config (no imports) so it loads with a globally installed
// vitest even when node_modules is absent.
export default {
  test: {
    // The digest-corpus test hashes a 100 MB file in pure TypeScript.
    testTimeout: 120000,
    hookTimeout: 120000,
  },
};
