"""Factory for model instances and a model-independent likelihood helper.

This module encapsulates the instantiation of the four volatility models so
estimation, forecasting and the pipeline can be written against
``IVolatilityModel`` only.
"""

from regimecast.data.market_data import ReturnSeries
from regimecast.models.garch import EgarchModel, GarchModel, GjrModel
from regimecast.models.interfaces import FilterOutput, IVolatilityModel, ModelKind
from regimecast.models.mrs import MrsGarchModel
from regimecast.models.params import ParamVector


class ModelFactory:
    """Factory for creating model instances."""

    @staticmethod
    def get_model(kind: ModelKind | str) -> IVolatilityModel:
        """Get an instance of the specified model.

        Args:
            kind: The model to create (e.g. "garch", "mrs").

        Returns:
            An instance of IVolatilityModel.

        Raises:
            ValueError: If the model kind is unsupported.

        """
        match ModelKind(kind):
            case ModelKind.GARCH:
                return GarchModel()
            case ModelKind.GJR:
                return GjrModel()
            case ModelKind.EGARCH:
                return EgarchModel()
            case ModelKind.MRS:
                return MrsGarchModel()
        raise ValueError(f"Unsupported model kind: {kind}")


def loglik(
    model: ModelKind | str,
    params: ParamVector,
    returns: ReturnSeries,
    h_init: float,
) -> tuple[float, FilterOutput]:
    """Return the log-likelihood of a series and the filtered path.

    Raises:
        FilterError: If the filter breaks down or the likelihood is not
            finite.

    """
    path = ModelFactory.get_model(model).filter(
        params, returns.values, h_init, returns.dates
    )
    return path.loglik, path
