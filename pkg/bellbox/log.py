import sys

from colorama import Fore, Style


def success(msg: str) -> None:
    """Print ``msg`` in `colorama` `Fore.GREEN` colour."""
    print(f"{Fore.GREEN}{msg}{Style.RESET_ALL}")
    return


def info(msg: str) -> None:
    """Print ``msg`` in `colorama` `Fore.CYAN` colour."""
    print(f"{Fore.CYAN}{msg}{Style.RESET_ALL}")
    return


def warning(msg: str) -> None:
    """Print ``msg`` in `colorama` `Fore.YELLOW` colour."""
    print(f"{Fore.YELLOW}Warning: {msg}{Style.RESET_ALL}")
    return


def verdict(msg: str, ok: bool) -> None:
    """Print ``msg`` green if ``ok`` else yellow, for pass/fail report lines.

    Example:
        ```pycon
        >>> verdict("marginal law satisfied", ok=True)
        ...marginal law satisfied...
        >>> verdict("marginal law violated", ok=False)
        ...Warning: marginal law violated...

        ```
    """
    if ok:
        success(msg)
    else:
        warning(msg)
    return


def error(msg: str) -> None:
    """Print ``msg`` in `colorama` `Fore.RED` colour to standard error."""
    print(f"{Fore.RED}Error: {msg}{Style.RESET_ALL}", file=sys.stderr)
    return
