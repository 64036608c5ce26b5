"""
命令行入口

  hecke suite --type A2 --window 3 --I 1 --J 2 --json out.json
  hecke expand --type A1 --I S --J S --basis kl --expr "chi(T 1)"
  hecke kl-table --type A1affine --maxlen 8 --tsv out.tsv
  hecke cosets --type A2 --I 1 --J 2 --weight-window 3
"""
import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional, TextIO

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import HeckeConfig, default_config
from hecke_core.double_coset_module import BASES, HIJElt
from hecke_core.errors import HeckeError, HeckeInputError
from hecke_core.hecke_algebra import HeckeElt
from hecke_core.laurent import LaurentPoly, render
from hecke_core.manager import HeckeManager
from hecke_core.models import CosetIndex, ExpansionReport, ExpansionTerm
from cli.suite import registered_checks, run_suite


logger = logging.getLogger(__name__)


def _config_from_args(args: argparse.Namespace) -> HeckeConfig:
    config = HeckeConfig(
        data_dir=args.data_dir or default_config.data_dir,
        enable_cache=not args.no_cache,
        preset=args.type,
        datum_file=args.datum_file,
        log_level="DEBUG" if args.verbose else default_config.log_level,
    )
    for attr in ("window", "weight_window", "gamma_window", "workers"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, "length_window" if attr == "window" else attr, value)
    return config


def _basis_label(basis: str, idx: CosetIndex) -> str:
    if basis == "bernstein":
        word = idx.z.label()
        return f"θ_{','.join(map(str, idx.weight))} T_{word}"
    if basis == "kl":
        return f"C'{idx.label()}"
    return f"T{idx.label()}"


def _sorted_coords(coords: Dict[CosetIndex, LaurentPoly]) -> List[CosetIndex]:
    return sorted(coords, key=lambda idx: (idx.z.length, idx.z.word, idx.weight))


def _write(path: Optional[str], text: str, out: TextIO):
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        out.write(text)


# ========== 子命令 ==========

def cmd_suite(args: argparse.Namespace, config: HeckeConfig) -> int:
    if args.list:
        for name in registered_checks():
            print(name)
        return 0
    manager = HeckeManager(config)
    cases = []
    if args.I is not None or args.J is not None:
        cases.append((manager.subset(args.I), manager.subset(args.J)))
    report = run_suite(config, cases=cases, only=args.only, manager=manager)
    for record in report.checks:
        where = ""
        if "I" in record.parameters:
            where = f" I={record.parameters['I']} J={record.parameters['J']}"
        line = f"{record.status.upper():4} {record.name}{where}"
        if record.status == "fail":
            line += f"  反例: {record.counterexample}"
            if record.detail:
                line += f" ({record.detail})"
        print(line)
    print(f"{len(report.checks) - len(report.failures)}/{len(report.checks)} 通过, all_even={report.notes['all_even']}")
    if args.json:
        _write(args.json, report.to_json(drop_timing=args.no_timing), sys.stdout)
    return 0 if report.passed else 1


def cmd_expand(args: argparse.Namespace, config: HeckeConfig) -> int:
    manager = HeckeManager(config)
    left, right = manager.subset(args.I), manager.subset(args.J)
    module = manager.module(left, right)
    value = manager.parse(args.expr, left, right)
    if isinstance(value, HeckeElt):
        value = module.chi(value)
    assert isinstance(value, HIJElt)
    coords = module.coords(args.basis, value)

    for idx in _sorted_coords(coords):
        print(f"{_basis_label(args.basis, idx)}: {render(coords[idx])}")
    print(f"carrier: {manager.hecke.render(value.carrier)}")

    if args.json:
        report = ExpansionReport(
            I=left.to_list(),
            J=right.to_list(),
            basis=args.basis,
            expansion=[
                ExpansionTerm(element=idx.to_dict(), coeff=render(coords[idx]))
                for idx in _sorted_coords(coords)
            ],
            carrier=[ExpansionTerm(**term) for term in manager.hecke.to_json(value.carrier)],
        )
        _write(args.json, report.to_json(), sys.stdout)
    manager.persist_kl_table()
    return 0


def cmd_kl_table(args: argparse.Namespace, config: HeckeConfig) -> int:
    manager = HeckeManager(config)
    lines = ["y\tx\tl(y)\tl(x)\tP"]
    for y, x, ly, lx, p in manager.kl_rows(args.maxlen):
        lines.append(f"{y.label()}\t{x.label()}\t{ly}\t{lx}\t{render(p)}")
    _write(args.tsv, "\n".join(lines) + "\n", sys.stdout)
    manager.persist_kl_table()
    if args.export and manager.storage is not None:
        manager.storage.export_json(manager.datum, args.export)
    return 0


def cmd_cosets(args: argparse.Namespace, config: HeckeConfig) -> int:
    manager = HeckeManager(config)
    left, right = manager.subset(args.I), manager.subset(args.J)
    window = config.weight_window
    module = manager.module(left, right)

    if args.straighten:
        lines = ["z\tmu\tlambda\tcoeff"]
        for z in module.reps:
            table = module.straightening_table(z, manager.datum.weights_in_box(window))
            for mu, coords in sorted(table.items()):
                for lam in sorted(coords):
                    lines.append(f"{z.label()}\t{mu}\t{lam}\t{render(coords[lam])}")
        _write(args.tsv, "\n".join(lines) + "\n", sys.stdout)
        return 0

    if args.transition:
        try:
            source, target = args.transition.split(":")
        except ValueError as e:
            raise HeckeInputError("--transition 的格式应为 源:目标，如 standard:kl") from e
        for name in (source, target):
            if name not in BASES:
                raise HeckeInputError(f"未知的基 {name!r}，可选 {', '.join(BASES)}")
        indices = module.coset_indices(window)
        lines = ["source\ttarget\tcoeff"]
        for idx, coords in module.transition_matrix(source, target, indices).items():
            for other in _sorted_coords(coords):
                lines.append(f"{idx.label()}\t{other.label()}\t{render(coords[other])}")
        _write(args.tsv, "\n".join(lines) + "\n", sys.stdout)
        return 0

    summary = manager.coset_summary(left, right, window)
    print(json.dumps(summary, ensure_ascii=False, indent=2))
    return 0


# ========== 参数 ==========

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hecke",
        description="扩展仿射 Hecke 代数、KL 多项式与双陪集模 H^{IJ} 的计算与验证",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default=default_config.preset, help="预设根数据名，如 A1, A2, B2, G2, A1affine")
    common.add_argument("--datum-file", help="根数据 JSON 文件，优先于 --type")
    common.add_argument("--data-dir", help="KL 缓存目录")
    common.add_argument("--no-cache", action="store_true", help="不读写 KL 缓存")
    common.add_argument("--gamma-window", type=int, help="Γ 无限时平移坐标的截断")
    common.add_argument("-v", "--verbose", action="store_true", help="输出 DEBUG 日志")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suite", parents=[common], help="运行验证套件")
    p.add_argument("--window", type=int, help="W_ex 长度窗口")
    p.add_argument("--weight-window", type=int, help="权坐标窗口")
    p.add_argument("--I", help="额外的 (I, J) 组合中的 I，如 1 或 1,2 或 S")
    p.add_argument("--J", help="额外的 (I, J) 组合中的 J")
    p.add_argument("--only", nargs="+", help="只运行这些检查")
    p.add_argument("--workers", type=int, help="各 (I, J) 检查的进程数")
    p.add_argument("--list", action="store_true", help="列出全部注册的检查")
    p.add_argument("--json", help="把报告写入 JSON 文件")
    p.add_argument("--no-timing", action="store_true", help="报告中去掉耗时字段")
    p.set_defaults(handler=cmd_suite)

    p = sub.add_parser("expand", parents=[common], help="把元素在某组基下展开")
    p.add_argument("--I", default="", help="I，默认空集")
    p.add_argument("--J", default="", help="J，默认空集")
    p.add_argument("--basis", choices=BASES, default="standard")
    p.add_argument("--expr", required=True, help='元素表达式，如 "chi(T 1)"')
    p.add_argument("--json", help="把展开写入 JSON 文件")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("kl-table", parents=[common], help="输出 KL 多项式表")
    p.add_argument("--maxlen", type=int, default=default_config.length_window)
    p.add_argument("--tsv", help="写入 TSV 文件")
    p.add_argument("--export", help="把缓存导出为 JSON 文件")
    p.set_defaults(handler=cmd_kl_table)

    p = sub.add_parser("cosets", parents=[common], help="双陪集指标、拉直系数与过渡矩阵")
    p.add_argument("--I", default="", help="I，默认空集")
    p.add_argument("--J", default="", help="J，默认空集")
    p.add_argument("--weight-window", type=int, help="权坐标窗口")
    p.add_argument("--straighten", action="store_true", help="输出拉直系数表")
    p.add_argument("--transition", help="输出过渡矩阵，如 standard:kl")
    p.add_argument("--tsv", help="写入 TSV 文件")
    p.set_defaults(handler=cmd_cosets)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    logging.basicConfig(
        level=config.log_level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return args.handler(args, config)
    except HeckeInputError as e:
        print(f"输入错误: {e}", file=sys.stderr)
        return 2
    except HeckeError as e:
        print(f"错误: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
