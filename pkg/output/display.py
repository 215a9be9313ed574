"""
终端展示模块
"""
from typing import Optional, Sequence

from rich.console import Console
from rich.table import Table
from rich.panel import Panel
from rich.text import Text
from rich import box
from rich.markup import escape

from core.models import CheckResult, CycleResult, Manifest, MaxReport, Spectrum, SweepResult, Window


def _scientific(value: float, digits: int = 4) -> str:
    """科学计数法，指数不补零（1.086e-2）"""
    mantissa, exponent = f"{value:.{digits - 1}e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def cycle_line(result: CycleResult) -> str:
    """单次循环的一行摘要"""
    eta = f"{result.efficiency:.6g}" if result.efficiency is not None else "-"
    return (
        f"W={_scientific(result.work)} Q1={result.q_hot:.6g} Q2={result.q_cold:.6g} "
        f"eta={eta} eta_c={result.carnot:.6g} regime={result.regime.value}"
    )


class RunDisplay:
    """
    运行展示器

    使用 rich 库输出表格与面板
    """

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def show_welcome(self) -> None:
        """长时运行命令（图预设、自检）开始前的标题"""
        title = Text()
        title.append("LMG 量子 Otto 热机", style="bold magenta")

        self.console.print(Panel(
            "[bold cyan]两自旋各向异性 LMG 工作物质[/bold cyan]\n"
            "[dim]能谱 · Otto 循环 · 参数扫描 · 图预设[/dim]",
            title=title,
            border_style="magenta",
            padding=(0, 2),
        ))

    def show_spectrum(self, spectrum: Spectrum) -> None:
        """显示带结构标签的能谱"""
        p = spectrum.params
        table = Table(
            title=f"能谱 (J={p.J:g}, γ={p.gamma:g}, h={p.h:g})",
            box=box.ROUNDED,
            header_style="bold cyan",
        )
        table.add_column("n", style="bold")
        table.add_column("E_n", justify="right")
        table.add_column("ψ_n (|11>, |10>, |01>, |00>)")

        for n in range(1, 5):
            vector = ", ".join(f"{c:+.6f}" for c in spectrum.vector(n))
            table.add_row(str(n), f"{spectrum.energy(n):.12g}", vector)

        self.console.print(table)
        a_minus = f"{spectrum.a_minus:.6g}" if spectrum.a_minus is not None else "-"
        a_plus = f"{spectrum.a_plus:.6g}" if spectrum.a_plus is not None else "-"
        self.console.print(f"  κ={spectrum.kappa:.12g}  A-={a_minus}  A+={a_plus}", highlight=False)

    def show_cycle(self, result: CycleResult) -> None:
        """显示单次循环结果（纯文本一行，便于脚本解析）"""
        self.console.print(cycle_line(result), soft_wrap=True, markup=False, highlight=False)

    def show_sweep_summary(
        self,
        result: SweepResult,
        best: Optional[MaxReport] = None,
        window: Optional[Window] = None,
    ) -> None:
        """显示扫描摘要"""
        table = Table(title=f"扫描 {result.axis}", box=box.SIMPLE, header_style="bold cyan")
        table.add_column("项目", style="bold")
        table.add_column("值")

        regimes: dict[str, int] = {}
        for row in result.rows:
            key = row.regime.value if row.regime is not None else "error"
            regimes[key] = regimes.get(key, 0) + 1

        table.add_row("点数", str(len(result.rows)))
        table.add_row("状态统计", ", ".join(f"{k}: {v}" for k, v in sorted(regimes.items())))
        if best is not None:
            flag = " (区间端点)" if best.on_boundary else ""
            table.add_row("W_m", f"{best.value:.8g} @ {result.axis}={best.arg:.8g}{flag}")
        if window is not None:
            text = "空" if window.is_empty else ", ".join(f"[{lo:.8g}, {hi:.8g}]" for lo, hi in window.intervals)
            table.add_row("热机窗口", text)

        self.console.print(table)

    def show_manifest(self, manifest: Manifest, out_dir: str) -> None:
        """显示预设写出的文件"""
        table = Table(
            title=f"{manifest.preset} ({manifest.source_label}) -> {out_dir}",
            box=box.ROUNDED,
            header_style="bold cyan",
        )
        table.add_column("文件", style="bold")
        table.add_column("类型")
        table.add_column("曲线", style="dim")

        for entry in manifest.files:
            table.add_row(entry.path, entry.role, entry.label or entry.panel)

        self.console.print(table)

    def show_selftest(self, results: Sequence[CheckResult]) -> None:
        """显示自检统计"""
        table = Table(title="自检", box=box.SIMPLE, header_style="bold cyan")
        table.add_column("套件", style="bold")
        table.add_column("通过", style="green")
        table.add_column("失败", style="red")

        suites: dict[str, list[int]] = {}
        for check in results:
            counts = suites.setdefault(check.suite, [0, 0])
            counts[0 if check.passed else 1] += 1
        for suite, (passed, failed) in suites.items():
            table.add_row(suite, str(passed), str(failed))

        self.console.print(table)
        for check in results:
            if not check.passed:
                self.show_error(f"{check.suite}/{check.name}: {check.detail}")

    def show_error(self, message: str) -> None:
        """显示错误"""
        self.console.print(f"[bold red]❌ 错误:[/bold red] {escape(message)}")

    def show_info(self, message: str) -> None:
        """显示信息"""
        self.console.print(f"[bold blue]ℹ️[/bold blue] {escape(message)}")
