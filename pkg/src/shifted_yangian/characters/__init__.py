"""q-characters, Jordan–Hölder peeling and standard factorization."""
