"""
存储层：KL 表的 SQLite 缓存
每个完成的 C'_x 存成一列 {y: P_{y,x}}，下次启动时整列读回。
列按 (根数据名, 根数据指纹) 归属，同名但 Cartan 矩阵或坐标不同的根数据互不可见
"""
import sqlite3
import json
import logging
import os
from typing import Any, Dict, List, Mapping, Optional
from contextlib import contextmanager

import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import HeckeConfig
from hecke_core.errors import HeckeInputError
from hecke_core.ext_affine_weyl import ExtAffElt, ExtendedAffineWeylGroup
from hecke_core.laurent import LaurentPoly, parse_laurent, render
from hecke_core.root_datum import RootDatum


logger = logging.getLogger(__name__)


def _key(data: Mapping[str, Any]) -> str:
    return json.dumps({"lambda": list(data["lambda"]), "w": list(data["w"])}, sort_keys=True)


class KLStorage:
    """KL 多项式的 SQLite 存储"""

    def __init__(self, config: HeckeConfig):
        self.config = config
        self.db_path = config.get_db_path()

        # 确保数据目录存在
        os.makedirs(config.data_dir, exist_ok=True)

        self._init_database()

    def _init_database(self):
        """初始化数据库表结构"""
        with self._get_connection() as conn:
            cursor = conn.cursor()

            # 已完成的列
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS kl_columns (
                    datum TEXT,
                    fingerprint TEXT,
                    x TEXT,
                    length INTEGER,
                    PRIMARY KEY (datum, fingerprint, x)
                )
            ''')

            # 列中的每一项 P_{y,x}
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS kl_entries (
                    datum TEXT,
                    fingerprint TEXT,
                    x TEXT,
                    y TEXT,
                    poly TEXT,
                    PRIMARY KEY (datum, fingerprint, x, y)
                )
            ''')
            cursor.execute('CREATE INDEX IF NOT EXISTS idx_entries_column ON kl_entries(datum, fingerprint, x)')

            conn.commit()

    @contextmanager
    def _get_connection(self):
        """获取数据库连接（上下文管理器）"""
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
        finally:
            conn.close()

    # ========== 列操作 ==========

    def save_column(
        self, ext: ExtendedAffineWeylGroup, x: ExtAffElt, column: Mapping[ExtAffElt, LaurentPoly]
    ):
        """保存一整列 {y: P_{y,x}}"""
        datum, fp = ext.datum.name, ext.datum.fingerprint
        x_key = _key(ext.to_dict(x))
        with self._get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(
                'DELETE FROM kl_entries WHERE datum = ? AND fingerprint = ? AND x = ?', (datum, fp, x_key)
            )
            cursor.executemany('''
                INSERT INTO kl_entries (datum, fingerprint, x, y, poly) VALUES (?, ?, ?, ?, ?)
            ''', [(datum, fp, x_key, _key(ext.to_dict(y)), render(p)) for y, p in column.items()])
            cursor.execute('''
                INSERT OR REPLACE INTO kl_columns (datum, fingerprint, x, length) VALUES (?, ?, ?, ?)
            ''', (datum, fp, x_key, ext.length(x)))
            conn.commit()

    def _select_entries(self, cursor, datum: RootDatum):
        cursor.execute('''
            SELECT e.x, e.y, e.poly FROM kl_entries e
            JOIN kl_columns c ON c.datum = e.datum AND c.fingerprint = e.fingerprint AND c.x = e.x
            WHERE e.datum = ? AND e.fingerprint = ?
            ORDER BY c.length ASC, e.x ASC, e.y ASC
        ''', (datum.name, datum.fingerprint))
        return cursor.fetchall()

    def load_columns(self, ext: ExtendedAffineWeylGroup) -> Dict[ExtAffElt, Dict[ExtAffElt, LaurentPoly]]:
        """读回该根数据的全部已完成列"""
        out: Dict[ExtAffElt, Dict[ExtAffElt, LaurentPoly]] = {}
        with self._get_connection() as conn:
            for row in self._select_entries(conn.cursor(), ext.datum):
                x = ext.from_dict(json.loads(row['x']))
                y = ext.from_dict(json.loads(row['y']))
                out.setdefault(x, {})[y] = parse_laurent(row['poly'])
        logger.info("从缓存读回 %s 的 %d 列", ext.datum.name, len(out))
        return out

    def count_columns(self, datum: str, fingerprint: Optional[str] = None) -> int:
        """按名称计数；给出 fingerprint 时只数该指纹下的列"""
        with self._get_connection() as conn:
            cursor = conn.cursor()
            if fingerprint is None:
                cursor.execute('SELECT COUNT(*) FROM kl_columns WHERE datum = ?', (datum,))
            else:
                cursor.execute(
                    'SELECT COUNT(*) FROM kl_columns WHERE datum = ? AND fingerprint = ?', (datum, fingerprint)
                )
            return cursor.fetchone()[0]

    def clear(self, datum: str) -> int:
        """删除该名称下的全部缓存，返回删除的列数"""
        with self._get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute('DELETE FROM kl_entries WHERE datum = ?', (datum,))
            cursor.execute('DELETE FROM kl_columns WHERE datum = ?', (datum,))
            deleted = cursor.rowcount
            conn.commit()
            return deleted

    # ========== 导入导出 ==========

    def export_table(self, datum: RootDatum) -> Dict[str, Any]:
        """{"datum": 名称, "fingerprint": 指纹, "entries": [{y, x, P}, ...]}"""
        with self._get_connection() as conn:
            entries: List[Dict[str, Any]] = [
                {"y": json.loads(row['y']), "x": json.loads(row['x']), "P": row['poly']}
                for row in self._select_entries(conn.cursor(), datum)
            ]
        return {"datum": datum.name, "fingerprint": datum.fingerprint, "entries": entries}

    def import_table(self, ext: ExtendedAffineWeylGroup, data: Mapping[str, Any]) -> int:
        """写入 export_table 格式的数据，返回写入的项数"""
        datum = ext.datum
        if data.get("datum") != datum.name:
            raise HeckeInputError(f"缓存文件属于 {data.get('datum')!r}，当前根数据为 {datum.name!r}")
        if data.get("fingerprint") != datum.fingerprint:
            raise HeckeInputError(
                f"缓存文件的根数据指纹 {data.get('fingerprint')!r} 与 {datum.name} 的 {datum.fingerprint!r} 不符"
            )
        columns: Dict[ExtAffElt, Dict[ExtAffElt, LaurentPoly]] = {}
        try:
            for entry in data["entries"]:
                x = ext.from_dict(entry["x"])
                columns.setdefault(x, {})[ext.from_dict(entry["y"])] = parse_laurent(entry["P"])
        except (KeyError, TypeError) as e:
            raise HeckeInputError(f"缓存文件格式错误: {e}") from e
        for x, column in columns.items():
            self.save_column(ext, x, column)
        return sum(len(c) for c in columns.values())

    def export_json(self, datum: RootDatum, path: str):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.export_table(datum), f, ensure_ascii=False, indent=2)

    def import_json(self, ext: ExtendedAffineWeylGroup, path: str) -> int:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise HeckeInputError(f"无法读取缓存文件 {path}: {e}") from e
        return self.import_table(ext, data)
