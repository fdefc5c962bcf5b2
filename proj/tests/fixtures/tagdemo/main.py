import sys

import git
from handler import TagHandler


def main(path):
    tag_handler = TagHandler(git.list_tags(path))
    print(tag_handler.latest())
    return tag_handler


if __name__ == "__main__":
    main(sys.argv[1])
