"""Sparrow search (SSA / TFSSA) experiments: optimizers, benchmarks, feature selection."""
