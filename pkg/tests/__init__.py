# pydyno tests
