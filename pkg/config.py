# =============================================================================
# CONFIGURACIÓN - SEÑALIZACIÓN BAYESIANA EN COLAS DE VICKREY PARALELAS
# =============================================================================
# Este archivo contiene todas las constantes de configuración centralizadas
# para ajustar tolerancias, presupuestos y salidas sin tocar los algoritmos
# =============================================================================

# =============================================================================
# 🔢 CONFIGURACIÓN NUMÉRICA
# =============================================================================
DECIMAL_DIGITS = 12            # Dígitos significativos impresos junto a cada racional exacto
DECIMAL_PRECISION = 60         # Dígitos de trabajo de decimal para raíces de tangencia (> 80 bits)
ENVELOPE_TOLERANCE = "1e-25"   # Exceso máximo de F sobre la recta certificado de la envolvente
COLLINEAR_TOLERANCE = 1e-40    # Producto cruz por debajo del cual tres puntos se tratan como colineales

# =============================================================================
# 📐 CONFIGURACIÓN DE ARREGLOS DE HIPERPLANOS
# =============================================================================
MAX_EXACT_DIMENSION = 4        # Mayor número de escenarios d con enumeración exacta de celdas

# =============================================================================
# 🥚 CONFIGURACIÓN DEL MÉTODO DEL ELIPSOIDE
# =============================================================================
ELLIPSOID_ITER_FACTOR = 16     # Presupuesto: FACTOR * d^2 * ln(R*d/eps) + OFFSET iteraciones
ELLIPSOID_ITER_OFFSET = 64
ELLIPSOID_FLOAT_SLACK = 1e-6   # Holgura declarada para el intervalo [OPT - eps, OPT]
VOLUME_RATIO_TOLERANCE = 1e-6  # Desvío relativo tolerado del factor de contracción del volumen
BISECTION_MAX_STEPS = 200      # Caso d = 1: bisección en lugar de elipsoide

# =============================================================================
# 🔍 CONFIGURACIÓN DE ORÁCULOS
# =============================================================================
MAX_GRID_RESOLUTION = 2000     # Resolución máxima de la rejilla de fuerza bruta
MAX_GRID_DIMENSION = 3         # Mayor d admitido por la rejilla de fuerza bruta
INTERIOR_PULL_STEPS = 60       # Intentos de acercar un candidato de borde al interior de su celda

# =============================================================================
# ⌨️ CONFIGURACIÓN DE LA LÍNEA DE COMANDOS
# =============================================================================
DEFAULT_EPS = "1/10"           # Precisión por defecto de fptas y dual
DEFAULT_SAMPLES = 100          # Muestras por defecto del barrido
DEFAULT_TRIALS = 200           # Esquemas aleatorios por defecto en makespan-check
DEFAULT_SEED = 0               # Semilla por defecto de los comandos aleatorios
RANDOM_SIGNALS = 3             # Señales por esquema aleatorio
OUTPUT_DIR = "output"          # Carpeta base de los registros de cada ejecución

# Códigos de salida
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_PROPERTY_VIOLATION = 2

# =============================================================================
# 🎲 CONFIGURACIÓN DE INSTANCIAS ALEATORIAS
# =============================================================================
RANDOM_MAX_TRAVEL_TIME = 10    # Tiempos de viaje enteros en [0, RANDOM_MAX_TRAVEL_TIME]
RANDOM_CAPACITY_DENOMINATOR = 6  # Capacidades k/6 con k en [1, 6]
RANDOM_PRIOR_DENOMINATOR = 20  # Granularidad del prior aleatorio

# =============================================================================
# 🎨 CONFIGURACIÓN DE FIGURAS
# =============================================================================
FIGURE_WIDTH = 900             # Ancho del lienzo (px)
FIGURE_HEIGHT = 500            # Alto del lienzo (px)
SVG_MARGIN = 40                # Margen interior del SVG (px)
CURVE_COLOR = "royalblue"      # Color de la curva F(μ) o M(μ)
BREAKPOINT_COLOR = "gray"      # Color de los puntos de quiebre continuos
DISCONTINUITY_COLOR = "red"    # Color de los saltos

# =============================================================================
# 📝 NOTAS DE CONFIGURACIÓN
# =============================================================================
# Para cambiar la configuración:
# 1. Modifica las variables en este archivo
# 2. Vuelve a ejecutar el comando para aplicar los cambios
# =============================================================================
