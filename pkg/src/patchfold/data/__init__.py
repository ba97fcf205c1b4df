# Fixtures and JSON loaders
