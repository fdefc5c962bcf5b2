import json


class TagHandler:
    """Keeps a list of raw tag names."""

    separator = "\n"

    def __init__(self, raw_tags):
        self.raw_tags = raw_tags
        self.count = len(raw_tags)

    def latest(self):
        return self.raw_tags[0] if self.raw_tags else None

    def dump(self):
        return json.dumps(self.raw_tags)


def load(raw_tags):
    tag_handler = TagHandler(raw_tags)
    return tag_handler
