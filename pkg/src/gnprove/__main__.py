import logging
import signal
import sys

from . import GnProveError
from .cli import UsageError, dispatch, parse_args
from .messages import EXIT_INTERNAL, EXIT_USAGE


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as e:
        print(f"Error: {e}")
        return EXIT_USAGE

    logging.basicConfig(
        filename=args.log_file,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
    )
    log = logging.getLogger(__name__)
    log.info(f"gnprove {' '.join(sys.argv[1:] if argv is None else argv)}")

    def handle_sigint(signum, frame):
        print("\nCTRL-C received, shutting down...")
        raise KeyboardInterrupt

    signal.signal(signal.SIGINT, handle_sigint)

    try:
        return dispatch(args)
    except UsageError as e:
        print(f"Error: {e}")
        return EXIT_USAGE
    except (GnProveError, OSError, KeyError) as e:
        log.exception("run aborted")
        print(f"Error: {e}")
        return EXIT_INTERNAL
    except KeyboardInterrupt:
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
