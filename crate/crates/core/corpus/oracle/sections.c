void f(int n, int x, int y) {
#pragma omp parallel sections
{
#pragma omp section
{
    x = x + n;
    x = x + 1;
}
#pragma omp section
{
    y = y + n;
    y = y - 1;
}
}
}
