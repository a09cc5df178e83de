#pragma once

#include "stfem/assembly.hpp"
#include "stfem/coefficient.hpp"
#include "stfem/dofmap.hpp"
#include "stfem/element.hpp"
#include "stfem/errors.hpp"
#include "stfem/experiments.hpp"
#include "stfem/geometry.hpp"
#include "stfem/io_vtk.hpp"
#include "stfem/manufactured.hpp"
#include "stfem/mesh.hpp"
#include "stfem/norms.hpp"
#include "stfem/quadrature.hpp"
#include "stfem/solver.hpp"
#include "stfem/sparse.hpp"
#include "stfem/types.hpp"
