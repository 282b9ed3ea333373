"""Command-line driver: ``polarorder {relation,construct,sweep,render,rank}``."""

import argparse
import json
import sys
from pathlib import Path

from . import construction as cons
from .cache import Cache
from .errors import ConsistencyError, DomainError, FormatError
from .partial_order import transitive_closure
from .dimension_reduction import DrConfig, dr_update
from .reliability import ChannelModel, channel_metric, export_ranking, import_ranking
from .render import MAX_RENDER_N, relation_image, sweep_csv, to_ppm

EXIT_USAGE = 2
EXIT_CONSISTENCY = 3


class UsageError(Exception):
    pass


def _channel(text):
    try:
        return ChannelModel.parse(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rates(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate list {text!r}") from None


def _ints(text):
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _write(out, data):
    if out is None or out == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
    else:
        Path(out).write_bytes(data if isinstance(data, bytes) else data.encode())


def _relations(cache, n, model, use_dr, n_u, closure, ranking=None):
    R = cache.po_matrix(n)
    if not use_dr:
        return transitive_closure(R) if closure else R
    if n_u is None:
        if n <= 3:
            return R
        n_u = n - 3
    if ranking is None:
        if model is None:
            raise UsageError("--dr needs --channel or --ranking")
        ranking = cache.ranking(model, n_u)
    return dr_update(R, DrConfig(n=n, n_u=n_u, ranking=ranking, apply_closure=closure))


def cmd_relation(args, cache):
    R = cache.po_matrix(args.n)
    det = R.determined_count()
    print(f"n={args.n} N={R.N} determined={det}/{R.size} density={R.density():.6f}")
    return 0


def cmd_construct(args, cache):
    ranking = None
    if args.ranking:
        with open(args.ranking) as fh:
            ranking = import_ranking(fh)
        if args.nu is not None and args.nu != ranking.n_u:
            raise UsageError(f"--nu {args.nu} disagrees with the ranking's n_u={ranking.n_u}")
        args.nu = ranking.n_u
    if args.resolve and args.channel is None:
        raise UsageError("--resolve needs --channel")
    R = _relations(cache, args.n, args.channel, args.dr, args.nu, args.closure, ranking)
    c = cons.construct(
        args.n,
        args.rate,
        args.channel,
        use_dr=args.dr,
        resolve_u=args.resolve,
        relations=R,
        full_metric=channel_metric(args.channel, args.n) if args.resolve else None,
    )
    _write(args.out, json.dumps(c.to_dict()) + "\n")
    return 0


def _gamma(cache, n, rate, model, use_dr, n_u, closure):
    R = _relations(cache, n, model, use_dr, n_u, closure)
    return cons.construct(n, rate, model, use_dr=use_dr, relations=R).gamma


def cmd_sweep(args, cache):
    rows = []
    if args.mode == "rate":
        if args.n is None or args.rates is None:
            raise UsageError("rate sweep needs -n and --rates")
        for n in [args.n]:
            R_po = cache.po_matrix(n)
            R_dr = _relations(cache, n, args.channel, True, args.nu, args.closure)
            for r in args.rates:
                g_po = cons.construct(n, r, relations=R_po).gamma
                g_dr = cons.construct(n, r, args.channel, use_dr=True, relations=R_dr).gamma
                rows.append((r, g_po, g_dr))
    else:
        if args.ns is None or args.rate is None:
            raise UsageError("blocklength sweep needs --ns and -R")
        for n in args.ns:
            g_po = _gamma(cache, n, args.rate, None, False, None, False)
            g_dr = _gamma(cache, n, args.rate, args.channel, True, None, args.closure)
            rows.append((n, g_po, g_dr))
    _write(args.out, sweep_csv(rows))
    return 0


def cmd_render(args, cache):
    if args.n > MAX_RENDER_N:
        raise UsageError(f"render supports n <= {MAX_RENDER_N}")
    if args.dr and args.channel is None:
        raise UsageError("DR overlay needs --channel")
    use_dr = args.channel is not None
    R = _relations(cache, args.n, args.channel, use_dr, args.nu, args.closure)
    _write(args.out, to_ppm(relation_image(R)))
    return 0


def cmd_rank(args, cache):
    _write(args.out, export_ranking(cache.ranking(args.channel, args.nu)))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="polarorder", description="Polar code construction with partial orders.")
    p.add_argument("--cache-dir", help="cache directory (default: $POLARORDER_CACHE or ~/.cache/polarorder)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("relation", help="build or load the PO relation matrix")
    s.add_argument("-n", type=int, required=True)
    s.set_defaults(func=cmd_relation)

    s = sub.add_parser("construct", help="classify channels into I, F, U")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-R", "--rate", type=float, required=True)
    s.add_argument("--channel", type=_channel, help="bec:<eps> or awgn:<snr_db>")
    s.add_argument("--dr", action="store_true", help="apply dimension reduction")
    s.add_argument("--nu", type=int, help="upper length exponent for DR (default n-3)")
    s.add_argument("--closure", action="store_true", help="transitively close the relations")
    s.add_argument("--resolve", action="store_true", help="settle U with the full-length metric")
    s.add_argument("--ranking", help="ranking JSON to use for DR instead of the built-in evaluator")
    s.add_argument("--out", help="output file (default stdout)")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("sweep", help="gamma as a function of rate or block length (CSV)")
    s.add_argument("mode", choices=("rate", "blocklength"))
    s.add_argument("-n", type=int, help="block-length exponent (rate mode)")
    s.add_argument("--rates", type=_rates, help="comma separated rates (rate mode)")
    s.add_argument("--ns", type=_ints, help="exponents, e.g. 4..10 or 4,6,8 (blocklength mode)")
    s.add_argument("-R", "--rate", type=float, help="rate (blocklength mode)")
    s.add_argument("--channel", type=_channel, default=ChannelModel.awgn(1.0))
    s.add_argument("--nu", type=int)
    s.add_argument("--closure", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("render", help="PPM dot plot of the relation matrix")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--channel", type=_channel, help="add the DR overlay for this channel")
    s.add_argument("--dr", action="store_true", help="require the DR overlay")
    s.add_argument("--nu", type=int)
    s.add_argument("--closure", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("rank", help="export a built-in ranking as JSON")
    s.add_argument("--channel", type=_channel, required=True)
    s.add_argument("--nu", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_rank)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = Cache(args.cache_dir)
    try:
        return args.func(args, cache)
    except (UsageError, FormatError, DomainError) as exc:
        print(f"polarorder: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"polarorder: consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except OSError as exc:
        print(f"polarorder: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
