"""
边列表文本格式读写

每行 "src<TAB>dst[<TAB>weight]"，索引从0开始，'#' 之后为注释，权重缺省为 1.0。
写出时首行为 "# n=<节点数>"，读取时据此恢复末尾的孤立节点。
"""

from pathlib import Path
from typing import Optional, Union

from loguru import logger

from ..exceptions import DatasetFormatError
from ..models.graph import Graph
from .core import build_graph


def read_edge_list(
    path: Union[str, Path],
    n: Optional[int] = None,
    allow_self_loops: bool = False,
) -> Graph:
    """读取边列表文件"""
    path = Path(path)
    edges = []
    header_n = None
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            stripped = raw.strip()
            if stripped.startswith("#"):
                body = stripped.lstrip("#").strip()
                if body.startswith("n="):
                    try:
                        header_n = int(body[2:])
                    except ValueError:
                        raise DatasetFormatError(f"bad node-count header {body!r}", line_no, str(path))
                continue
            content = stripped.split("#", 1)[0].strip()
            if not content:
                continue
            tokens = content.split()
            if len(tokens) not in (2, 3):
                raise DatasetFormatError(
                    f"expected 'src dst [weight]', got {len(tokens)} fields", line_no, str(path)
                )
            try:
                i, j = int(tokens[0]), int(tokens[1])
                w = float(tokens[2]) if len(tokens) == 3 else 1.0
            except ValueError:
                raise DatasetFormatError(f"unparseable row {content!r}", line_no, str(path))
            edges.append((i, j, w))

    if n is None:
        n = header_n
    if n is None:
        n = max((max(i, j) for i, j, _ in edges), default=-1) + 1
    logger.debug(f"read {len(edges)} edge rows from {path.name}, n={n}")
    return build_graph(n, edges, allow_self_loops=allow_self_loops)


def write_edge_list(g: Graph, path: Union[str, Path]) -> Path:
    """写出边列表文件，权重以 repr 精度保存"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# n={g.n}\n")
        for i, j, w in g.edges:
            f.write(f"{i}\t{j}\t{w!r}\n")
    return path
