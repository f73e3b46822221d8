"""Figure rendering for MC-CDMA simulator CSV output.

Consumes the simulator's results CSV (``detector,K,ebn0_db,bits,
bit_errors,frames,frame_errors,ber,fer,seed``) and extraction CSV
(``detector,K,metric,target,required_ebn0_db,reached``) purely as files;
plotted values pass through unmodified.
"""

__version__ = "0.1.0"

from .figures import FigureSpec, plot_curves, plot_load

__all__ = ["FigureSpec", "plot_curves", "plot_load", "__version__"]
