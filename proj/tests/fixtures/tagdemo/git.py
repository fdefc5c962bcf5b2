"""Thin wrappers around the git command line."""
import subprocess

GIT_BINARY = "git"


def run(repo, *args):
    out = subprocess.run([GIT_BINARY, "-C", repo, *args], capture_output=True, text=True)
    return out.stdout


def list_tags(repo):
    """Return the tags of a repository, newest first."""
    return run(repo, "tag", "--sort=-creatordate").splitlines()
