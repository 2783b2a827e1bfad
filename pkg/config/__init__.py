"""Location of the default settings file."""
