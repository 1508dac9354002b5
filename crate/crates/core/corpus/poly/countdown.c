void f(int n, int x) {
    int y;
    y = 0;
    while (n > 0) {
        n = n - 1;
        y = x;
    }
}
