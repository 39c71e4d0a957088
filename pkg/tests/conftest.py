import hypothesis

# The sandbox is slow and single-core; wall-clock deadlines only add flake.
# derandomize keeps example generation reproducible run to run.
hypothesis.settings.register_profile(
    "package",
    deadline=None,
    derandomize=True,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("package")
