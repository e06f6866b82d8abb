# Shared helpers: error types, settings, JSON interchange and run manifests
