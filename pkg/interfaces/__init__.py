"""Request and response models: the only types use cases take and return."""
