void f(int n, int x, int y) {
    while (n > 0) {
        x = x + y;
        y = y + x;
        n = n - 1;
    }
    x = 0;
    y = n + 1;
}
