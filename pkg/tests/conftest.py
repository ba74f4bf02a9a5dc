from hypothesis import HealthCheck, settings

# Property tests call numerically heavy routines; wall-clock deadlines only
# add flakiness on loaded machines.
settings.register_profile(
    "mixbound",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("mixbound")
