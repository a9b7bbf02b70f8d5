from hypothesis import HealthCheck, settings

# Property cases build exact-rational sequences whose runtime varies a lot
# with the drawn denominators; wall-clock deadlines just add flakiness here.
settings.register_profile(
    "kbonacci",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kbonacci")
