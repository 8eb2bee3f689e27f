# Infrastructure Layer - External dependencies and concrete implementations
