# Domain Layer - Core business logic with no external dependencies
