"""Long-running numerical jobs: relaxation, time evolution and experiments."""
