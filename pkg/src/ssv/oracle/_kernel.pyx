# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled enumeration kernel. Keep in lockstep with ``_kernel_py.py``."""

from libc.stdlib cimport free, malloc

from .compiler import (
    OP_ADD, OP_AND, OP_DISTINCT, OP_EQ, OP_GE, OP_GT, OP_IMPLIES, OP_ITE,
    OP_LE, OP_LOAD, OP_LOADF, OP_LT, OP_NE, OP_NOT, OP_OR, OP_PUSH, OP_SUB,
    OP_SUM, OP_XOR,
)

MODE_EXISTS = 0
MODE_COUNT = 1
MODE_EVAL = 2

COMPILED = True

cdef long long OPC_PUSH = OP_PUSH
cdef long long OPC_LOAD = OP_LOAD
cdef long long OPC_LOADF = OP_LOADF
cdef long long OPC_EQ = OP_EQ
cdef long long OPC_NE = OP_NE
cdef long long OPC_LT = OP_LT
cdef long long OPC_LE = OP_LE
cdef long long OPC_GT = OP_GT
cdef long long OPC_GE = OP_GE
cdef long long OPC_ADD = OP_ADD
cdef long long OPC_SUB = OP_SUB
cdef long long OPC_NOT = OP_NOT
cdef long long OPC_AND = OP_AND
cdef long long OPC_OR = OP_OR
cdef long long OPC_SUM = OP_SUM
cdef long long OPC_DISTINCT = OP_DISTINCT
cdef long long OPC_IMPLIES = OP_IMPLIES
cdef long long OPC_XOR = OP_XOR
cdef long long OPC_ITE = OP_ITE


cdef long long _eval(const long long* code, int start, int end,
                     const long long* cells, long long* stack) nogil:
    cdef int sp = 0
    cdef int pc = start
    cdef long long op, value, total, index
    cdef int n, i, j, nargs, base
    while pc < end:
        op = code[pc]
        pc += 1
        if op == OPC_PUSH:
            stack[sp] = code[pc]
            pc += 1
            sp += 1
        elif op == OPC_LOAD:
            stack[sp] = cells[code[pc]]
            pc += 1
            sp += 1
        elif op == OPC_LOADF:
            nargs = <int>code[pc]
            base = <int>code[pc + 1]
            pc += 2
            index = stack[sp - nargs]
            for i in range(1, nargs):
                index = index * code[pc] + stack[sp - nargs + i]
                pc += 1
            sp -= nargs
            stack[sp] = cells[base + index]
            sp += 1
        elif op == OPC_EQ:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] == stack[sp] else 0
        elif op == OPC_NE:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] != stack[sp] else 0
        elif op == OPC_LT:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] < stack[sp] else 0
        elif op == OPC_LE:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] <= stack[sp] else 0
        elif op == OPC_GT:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] > stack[sp] else 0
        elif op == OPC_GE:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] >= stack[sp] else 0
        elif op == OPC_ADD:
            sp -= 1
            stack[sp - 1] += stack[sp]
        elif op == OPC_SUB:
            sp -= 1
            stack[sp - 1] -= stack[sp]
        elif op == OPC_NOT:
            stack[sp - 1] = 0 if stack[sp - 1] != 0 else 1
        elif op == OPC_AND:
            n = <int>code[pc]
            pc += 1
            value = 1
            for i in range(sp - n, sp):
                if stack[i] == 0:
                    value = 0
                    break
            sp -= n
            stack[sp] = value
            sp += 1
        elif op == OPC_OR:
            n = <int>code[pc]
            pc += 1
            value = 0
            for i in range(sp - n, sp):
                if stack[i] != 0:
                    value = 1
                    break
            sp -= n
            stack[sp] = value
            sp += 1
        elif op == OPC_SUM:
            n = <int>code[pc]
            pc += 1
            total = 0
            for i in range(sp - n, sp):
                total += stack[i]
            sp -= n
            stack[sp] = total
            sp += 1
        elif op == OPC_DISTINCT:
            n = <int>code[pc]
            pc += 1
            value = 1
            for i in range(sp - n, sp):
                for j in range(i + 1, sp):
                    if stack[i] == stack[j]:
                        value = 0
                        break
                if value == 0:
                    break
            sp -= n
            stack[sp] = value
            sp += 1
        elif op == OPC_IMPLIES:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] == 0 or stack[sp] != 0 else 0
        elif op == OPC_XOR:
            sp -= 1
            stack[sp - 1] = 1 if (stack[sp - 1] != 0) != (stack[sp] != 0) else 0
        elif op == OPC_ITE:
            sp -= 2
            stack[sp - 1] = stack[sp] if stack[sp - 1] != 0 else stack[sp + 1]
    return stack[0]


def run(code_obj, starts_obj, domains_obj, cells_obj, int mode, int max_stack):
    """Signature-compatible with ``_kernel_py.run``."""
    cdef const long long[::1] code = code_obj
    cdef const int[::1] starts = starts_obj
    cdef const int[::1] domains = domains_obj
    cdef long long[::1] cells_view = cells_obj
    cdef int ncells = domains.shape[0]
    cdef int nexprs = starts.shape[0] - 1
    cdef long long count = 0
    cdef long long value = 0
    cdef int i, k
    cdef bint ok
    cdef long long* stack
    cdef long long* cells = NULL
    cdef const long long* codep = NULL
    cdef const int* startp = NULL
    cdef const int* domp = NULL

    if max_stack < 1:
        max_stack = 1
    stack = <long long*>malloc(max_stack * sizeof(long long))
    if stack == NULL:
        raise MemoryError
    if ncells > 0:
        cells = &cells_view[0]
        domp = &domains[0]
    if code.shape[0] > 0:
        codep = &code[0]
    startp = &starts[0]
    try:
        if mode == 2:  # MODE_EVAL
            for i in range(nexprs):
                value = _eval(codep, startp[i], startp[i + 1], cells, stack)
            return value
        with nogil:
            while True:
                ok = True
                for i in range(nexprs):
                    if _eval(codep, startp[i], startp[i + 1], cells, stack) == 0:
                        ok = False
                        break
                if ok:
                    if mode == 0:  # MODE_EXISTS
                        count = 1
                        break
                    count += 1
                k = 0
                while k < ncells:
                    cells[k] += 1
                    if cells[k] < domp[k]:
                        break
                    cells[k] = 0
                    k += 1
                if k == ncells:
                    break
        if mode == 0:
            return 1 if count else 0
        return count
    finally:
        free(stack)
