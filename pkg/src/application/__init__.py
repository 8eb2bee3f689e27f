# Application Layer - Use cases and DTOs
