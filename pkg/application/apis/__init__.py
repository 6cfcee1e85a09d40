def register_commands(sub):
    """
    注册子命令
    :param sub: argparse 的 subparsers 对象
    """
    from .corrupt import register as register_corrupt
    from .catalog import register as register_catalog
    from .run import register as register_run
    from .report import register as register_report
    from .visualize import register as register_visualize
    from .sample import register as register_sample

    register_corrupt(sub)
    register_catalog(sub)
    register_run(sub)
    register_report(sub)
    register_visualize(sub)
    register_sample(sub)


__all__ = ["register_commands"]
