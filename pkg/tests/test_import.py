"""Basic import test for lingforge."""


def test_import() -> None:
    """Test that the package can be imported."""
    import lingforge  # noqa: F401


def test_version() -> None:
    """Test that the package exposes a version string."""
    from lingforge import __version__

    assert __version__.count(".") == 2
