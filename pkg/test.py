# Быстрая проверка основных построений
from geometry.partitions import validate_local_partition
from services.extension import example_instance_2d, extend_2d
from services.gadgets import tiling_t2
from services.minimal_local import enumerate_minimal_about, is_minimal_local
from services.separative import Config, PrincipalMatrix, cover_from_matrix, verify_cover_bound


def smoke():
    # Октант из 5 кусков
    cover = cover_from_matrix(PrincipalMatrix.of(Config.OCTANT_ROWS))
    bound = verify_cover_bound(cover)
    print(f"Октант: {len(cover.pieces)} кусков, ν={bound.nu}, β={bound.beta}")  # Должно быть 5 и 3

    # Минимальные разбиения около 0
    for n in (1, 2, 3):
        counts = [len(enumerate_minimal_about(n, k)) for k in range(n + 1)]
        print(f"n={n}: минимальных разбиений по k = {counts}")

    # Продолжение в R^2
    partition = extend_2d(example_instance_2d())
    valid = validate_local_partition(partition.pieces, partition.window).valid
    print(f"Продолжение: {len(partition.pieces)} кусков, корректно: {valid}, "
          f"минимально: {is_minimal_local(partition)}")  # Должно быть 5, True, True

    tiling = tiling_t2(1)
    print(f"T2 при s=1: {tiling.placements} размещений, {len(tiling.centers)} центров")  # 112 и 109


if __name__ == "__main__":
    smoke()
