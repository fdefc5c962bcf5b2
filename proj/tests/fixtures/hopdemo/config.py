DEFAULT_TIMEOUT = 30
RETRY_LIMIT = 3


class Settings:
    def __init__(self, timeout=DEFAULT_TIMEOUT):
        self.timeout = timeout

    def retries(self):
        return RETRY_LIMIT


settings = Settings()
