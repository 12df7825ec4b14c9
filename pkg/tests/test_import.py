def test_import() -> None:
    import coxwave  # noqa


def test_version() -> None:
    import coxwave

    assert isinstance(coxwave.__version__, str)
