void f(int x, int y, int z) {
    if (x < y) {
        z = x + y;
    } else {
        z = y - x;
    }
    x = z * 3;
}
