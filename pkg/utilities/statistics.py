from typing import List

from tabulate import tabulate

from models.theorem_report import TheoremReport


class Statistics:
    def __init__(self, reports: List[TheoremReport]):
        self.__reports = reports

    def create_statistics(self, detailed: bool = True) -> str:
        """
        Creates a table of every verification check in markdown.
        :param detailed: List passing checks too, not only the failed ones.
        :return: A table of the checks in markdown.
        """
        data = []
        for report in self.__reports:
            for check in report.checks:
                if not detailed and check.passed:
                    continue
                data.append([
                    report.theorem_id,
                    report.d,
                    check.description[:70],
                    f"{check.measured:.6g}",
                    f"{check.expected:.6g}",
                    check.relation,
                    check.passed
                ])
        table_str = tabulate(
            data,
            headers=["Theorem", "d", "Check", "Measured", "Expected", "Relation", "Pass"],
            tablefmt='pipe'
        )
        return table_str

    def summary(self) -> str:
        passed = sum(report.passed for report in self.__reports)
        return f"{passed} of {len(self.__reports)} theorem reports passed."

    @staticmethod
    def component_table(sizes: List[int]) -> str:
        """
        Creates a table of connected components and their point counts in markdown.
        """
        return tabulate([[label, size] for label, size in enumerate(sizes)],
                        headers=["Component", "Points"], tablefmt='pipe')
