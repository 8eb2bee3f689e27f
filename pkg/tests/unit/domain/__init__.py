# Domain layer unit tests
