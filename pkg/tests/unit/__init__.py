# Python unit tests
