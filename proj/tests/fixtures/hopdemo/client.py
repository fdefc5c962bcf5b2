from config import Settings


def fetch(url):
    settings = Settings(timeout=backoff(RETRY_LIMIT))
    return url, settings.timeout
