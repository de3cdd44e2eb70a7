"""Run configuration, the closed-loop driver, batch execution, logging,
replay/rescore, and report comparison."""
