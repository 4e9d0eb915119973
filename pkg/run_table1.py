from regression.table1_runner import Table1Runner
from tessella_logging.schemas import Convention

runner = Table1Runner(Convention.MIRROR)
report = runner.run()
