from strategies.command.command_strategy import CommandStrategy

COMMAND_NAMES = ('gamma', 'build', 'probe', 'scan', 'components', 'rays', 'verify', 'flow')


class CommandUtility:
    """
    Contains the selection of command line subcommands.
    """

    @staticmethod
    def get_command_strategy(name: str) -> CommandStrategy or None:
        """
        Returns the command strategy based on the supplied subcommand name.
        :param name: The subcommand.
        :return: The command strategy or None if none was found.
        """
        match name:
            case 'gamma':
                from strategies.command.gamma_command_strategy import GammaCommandStrategy
                return GammaCommandStrategy()
            case 'build':
                from strategies.command.build_command_strategy import BuildCommandStrategy
                return BuildCommandStrategy()
            case 'probe':
                from strategies.command.probe_command_strategy import ProbeCommandStrategy
                return ProbeCommandStrategy()
            case 'scan':
                from strategies.command.scan_command_strategy import ScanCommandStrategy
                return ScanCommandStrategy()
            case 'components':
                from strategies.command.components_command_strategy import ComponentsCommandStrategy
                return ComponentsCommandStrategy()
            case 'rays':
                from strategies.command.rays_command_strategy import RaysCommandStrategy
                return RaysCommandStrategy()
            case 'verify':
                from strategies.command.verify_command_strategy import VerifyCommandStrategy
                return VerifyCommandStrategy()
            case 'flow':
                from strategies.command.flow_command_strategy import FlowCommandStrategy
                return FlowCommandStrategy()
            case _:
                return None
