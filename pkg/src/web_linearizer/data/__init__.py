"""Tower persistence and in-memory memoisation."""
